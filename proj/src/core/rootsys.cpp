#include "core/rootsys.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace chamber {

namespace {

constexpr double kRootTol = 1e-10;

int find_root(const std::vector<Vector>& roots, const Vector& v) {
    for (size_t i = 0; i < roots.size(); ++i)
        if ((roots[i] - v).lpNorm<Eigen::Infinity>() <= kRootTol)
            return static_cast<int>(i);
    return -1;
}

std::string root_label(const Vector& alpha) {
    std::string s = "(";
    for (int i = 0; i < alpha.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", alpha[i]);
        s += buf;
        if (i + 1 < alpha.size()) s += ",";
    }
    return s + ")";
}

}  // namespace

RootFamily parse_root_family(const std::string& name) {
    if (name == "A") return RootFamily::A;
    if (name == "B") return RootFamily::B;
    if (name == "D") return RootFamily::D;
    if (name == "I2") return RootFamily::I2;
    throw Error(ErrorCode::Parse, "unknown root family: " + name);
}

const char* to_string(RootFamily family) {
    switch (family) {
        case RootFamily::A: return "A";
        case RootFamily::B: return "B";
        case RootFamily::D: return "D";
        case RootFamily::I2: return "I2";
    }
    return "?";
}

Vector reflect(const Vector& alpha, const Vector& x) {
    const double n2 = alpha.squaredNorm();
    if (!(n2 > 0)) throw Error(ErrorCode::InvalidArgument, "zero root vector");
    return x - (2.0 * alpha.dot(x) / n2) * alpha;
}

std::vector<std::vector<int>> root_orbits(const RootSystem& rs) {
    const int n = static_cast<int>(rs.roots.size());
    std::vector<int> orbit_of(n, -1);
    std::vector<std::vector<int>> orbits;
    for (int start = 0; start < n; ++start) {
        if (orbit_of[start] >= 0) continue;
        std::vector<int> orbit;
        std::deque<int> queue{start};
        orbit_of[start] = static_cast<int>(orbits.size());
        while (!queue.empty()) {
            const int i = queue.front();
            queue.pop_front();
            orbit.push_back(i);
            for (const Vector& beta : rs.roots) {
                const int j = find_root(rs.roots, reflect(beta, rs.roots[i]));
                if (j >= 0 && orbit_of[j] < 0) {
                    orbit_of[j] = orbit_of[start];
                    queue.push_back(j);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        orbits.push_back(std::move(orbit));
    }
    return orbits;
}

ValidationReport validate(const RootSystem& rs) {
    ValidationReport report;
    const int n = static_cast<int>(rs.roots.size());
    if (n == 0) {
        report.fail("root system is empty");
        return report;
    }
    for (const Vector& r : rs.roots) {
        if (r.size() != rs.ambient_dim) {
            report.fail("root dimension mismatch");
            return report;
        }
        if (r.norm() < kRootTol) report.fail("zero root vector");
    }

    // R intersect R*alpha = {alpha, -alpha}.
    for (int i = 0; i < n; ++i) {
        const Vector& a = rs.roots[i];
        int collinear = 0;
        bool has_negative = false;
        for (int j = 0; j < n; ++j) {
            const Vector& b = rs.roots[j];
            const double c = a.dot(b) / (a.norm() * b.norm());
            if (std::abs(std::abs(c) - 1.0) <= 1e-9) {
                ++collinear;
                if ((b + a).lpNorm<Eigen::Infinity>() <= kRootTol)
                    has_negative = true;
                else if (i != j)
                    report.fail("line through root " + root_label(a) +
                                " holds extra root " + root_label(b));
            }
        }
        if (!has_negative)
            report.fail("missing -alpha for root " + root_label(a));
        (void)collinear;  // extras reported per offending pair above
    }

    // s_alpha(R) = R.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (find_root(rs.roots, reflect(rs.roots[i], rs.roots[j])) < 0) {
                report.fail("reflection of " + root_label(rs.roots[j]) +
                            " across " + root_label(rs.roots[i]) +
                            " leaves the root set");
                break;
            }

    // Positivity against the witness.
    if (rs.witness.size() != rs.ambient_dim) {
        report.fail("witness dimension mismatch");
        return report;
    }
    std::vector<char> is_positive(n, 0);
    for (int i : rs.positive) {
        if (i < 0 || i >= n) {
            report.fail("positive index out of range");
            return report;
        }
        is_positive[i] = 1;
    }
    for (int i = 0; i < n; ++i) {
        const double s = rs.roots[i].dot(rs.witness);
        if (std::abs(s) <= kRootTol)
            report.fail("witness lies on the hyperplane of " +
                        root_label(rs.roots[i]));
        else if ((s > 0) != static_cast<bool>(is_positive[i]))
            report.fail("positive subset disagrees with the witness at " +
                        root_label(rs.roots[i]));
    }

    // Simple subset: a basis of span(R) with R+ in its nonnegative span.
    {
        Matrix S(rs.ambient_dim, static_cast<int>(rs.simple.size()));
        for (size_t c = 0; c < rs.simple.size(); ++c) {
            const int idx = rs.simple[c];
            if (idx < 0 || idx >= n) {
                report.fail("simple index out of range");
                return report;
            }
            if (!is_positive[idx])
                report.fail("simple root not in the positive subset");
            S.col(static_cast<int>(c)) = rs.roots[idx];
        }
        Matrix R(rs.ambient_dim, n);
        for (int c = 0; c < n; ++c) R.col(c) = rs.roots[c];
        const auto rankS = S.completeOrthogonalDecomposition().rank();
        const auto rankR = R.completeOrthogonalDecomposition().rank();
        if (rankS < static_cast<Eigen::Index>(rs.simple.size()))
            report.fail("simple roots are linearly dependent");
        if (rankS != rankR)
            report.fail("simple roots do not span the root system");
        if (rankS == static_cast<Eigen::Index>(rs.simple.size())) {
            const auto solver = S.completeOrthogonalDecomposition();
            for (int i : rs.positive) {
                const Vector coeff = solver.solve(rs.roots[i]);
                if ((S * coeff - rs.roots[i]).norm() > 1e-8)
                    report.fail("positive root outside span(S): " +
                                root_label(rs.roots[i]));
                else if (coeff.minCoeff() < -1e-9)
                    report.fail("positive root with a negative simple "
                                "coefficient: " + root_label(rs.roots[i]));
            }
        }
    }

    // Multiplicity invariance under the generated group: constant on orbits.
    if (rs.multiplicity.size() != rs.roots.size()) {
        report.fail("multiplicity size mismatch");
        return report;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int k = find_root(rs.roots, reflect(rs.roots[j], rs.roots[i]));
            if (k >= 0 &&
                std::abs(rs.multiplicity[i] - rs.multiplicity[k]) > 1e-12) {
                report.fail("multiplicity not invariant on the orbit of " +
                            root_label(rs.roots[i]));
                break;
            }
        }

    return report;
}

std::vector<int> simple_roots(const RootSystem& rs) {
    std::vector<int> simple;
    for (int ia : rs.positive) {
        const Vector& alpha = rs.roots[ia];
        bool decomposable = false;
        for (size_t bi = 0; bi < rs.positive.size() && !decomposable; ++bi)
            for (size_t ci = bi + 1; ci < rs.positive.size() && !decomposable;
                 ++ci) {
                const int ib = rs.positive[bi], ic = rs.positive[ci];
                if (ib == ia || ic == ia) continue;
                // Solve alpha = c1*beta + c2*gamma in least squares; exact
                // fit with strictly positive coefficients decomposes alpha.
                Matrix M(rs.ambient_dim, 2);
                M.col(0) = rs.roots[ib];
                M.col(1) = rs.roots[ic];
                const Vector coeff =
                    M.completeOrthogonalDecomposition().solve(alpha);
                if ((M * coeff - alpha).norm() <= 1e-9 &&
                    coeff[0] > 1e-9 && coeff[1] > 1e-9)
                    decomposable = true;
            }
        if (!decomposable) simple.push_back(ia);
    }
    return simple;
}

namespace {

RootSystem finish(RootSystem rs, const std::vector<double>& k_orbit_values) {
    // Positivity from the witness.
    rs.positive.clear();
    for (size_t i = 0; i < rs.roots.size(); ++i)
        if (rs.roots[i].dot(rs.witness) > 0)
            rs.positive.push_back(static_cast<int>(i));
    rs.simple = simple_roots(rs);

    // Multiplicity per orbit, orbits ordered by their smallest positive index.
    auto orbits = root_orbits(rs);
    std::sort(orbits.begin(), orbits.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    if (k_orbit_values.size() != orbits.size())
        throw Error(ErrorCode::InvalidArgument,
                    "expected " + std::to_string(orbits.size()) +
                        " multiplicity value(s), got " +
                        std::to_string(k_orbit_values.size()));
    rs.multiplicity.assign(rs.roots.size(), 0.0);
    for (size_t o = 0; o < orbits.size(); ++o)
        for (int idx : orbits[o]) rs.multiplicity[idx] = k_orbit_values[o];
    return rs;
}

Vector basis_diff(int dim, int i, int j) {  // e_i - e_j
    Vector v = Vector::Zero(dim);
    v[i] = 1.0;
    v[j] = -1.0;
    return v;
}

}  // namespace

RootSystem standard_root_system(RootFamily family, int rank_or_m,
                                const std::vector<double>& k_orbit_values) {
    RootSystem rs;
    rs.name = std::string(to_string(family)) + std::to_string(rank_or_m);
    switch (family) {
        case RootFamily::A: {
            if (rank_or_m < 1)
                throw Error(ErrorCode::InvalidArgument, "A needs rank >= 1");
            const int n = rank_or_m + 1;  // A_{rank} lives in R^{rank+1}
            rs.ambient_dim = n;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) rs.roots.push_back(basis_diff(n, i, j));
            rs.witness = Vector(n);
            for (int i = 0; i < n; ++i) rs.witness[i] = n - i;
            break;
        }
        case RootFamily::B: {
            if (rank_or_m < 2)
                throw Error(ErrorCode::InvalidArgument, "B needs rank >= 2");
            const int n = rank_or_m;
            rs.ambient_dim = n;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    rs.roots.push_back(basis_diff(n, i, j));
                    rs.roots.push_back(-basis_diff(n, i, j));
                    Vector s = Vector::Zero(n);
                    s[i] = s[j] = 1.0;
                    rs.roots.push_back(s);
                    rs.roots.push_back(-s);
                }
            for (int i = 0; i < n; ++i) {
                Vector e = Vector::Zero(n);
                e[i] = 1.0;
                rs.roots.push_back(e);
                rs.roots.push_back(-e);
            }
            rs.witness = Vector(n);
            for (int i = 0; i < n; ++i) rs.witness[i] = n - i;
            break;
        }
        case RootFamily::D: {
            if (rank_or_m < 2)
                throw Error(ErrorCode::InvalidArgument, "D needs rank >= 2");
            const int n = rank_or_m;
            rs.ambient_dim = n;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    rs.roots.push_back(basis_diff(n, i, j));
                    rs.roots.push_back(-basis_diff(n, i, j));
                    Vector s = Vector::Zero(n);
                    s[i] = s[j] = 1.0;
                    rs.roots.push_back(s);
                    rs.roots.push_back(-s);
                }
            rs.witness = Vector(n);
            for (int i = 0; i < n; ++i) rs.witness[i] = 2 * (n - i) - 1;
            rs.witness[n - 1] = 0.5;  // keep off the e_{n-1} +/- e_n walls
            break;
        }
        case RootFamily::I2: {
            if (rank_or_m < 3)
                throw Error(ErrorCode::InvalidArgument, "I2 needs m >= 3");
            const int m = rank_or_m;
            rs.ambient_dim = 2;
            for (int k = 0; k < 2 * m; ++k) {
                const double theta = M_PI * k / m;
                Vector r(2);
                r[0] = std::cos(theta);
                r[1] = std::sin(theta);
                // Snap near-zero components so exact negation pairs match.
                for (int c = 0; c < 2; ++c)
                    if (std::abs(r[c]) < 1e-15) r[c] = 0.0;
                rs.roots.push_back(r);
            }
            // Chamber direction: angles in ((m-1)pi/m - pi/2, pi/2).
            const double psi = 0.5 * ((m - 1) * M_PI / m - M_PI / 2 + M_PI / 2);
            rs.witness = Vector(2);
            rs.witness[0] = std::cos(psi);
            rs.witness[1] = std::sin(psi);
            break;
        }
    }
    rs = finish(std::move(rs), k_orbit_values);
    const ValidationReport report = validate(rs);
    if (!report.valid)
        throw Error(ErrorCode::Validation,
                    "standard root system failed validation: " +
                        report.failures.front());
    return rs;
}

PolyhedralModel dunkl_model(const RootSystem& rs) {
    for (int i : rs.positive)
        if (!(rs.multiplicity[i] > 0))
            throw Error(ErrorCode::InvalidArgument,
                        "dunkl model needs k > 0 on every positive root");

    // Simple faces first, in simple order; the remaining positive roots after.
    std::vector<int> order = rs.simple;
    for (int i : rs.positive)
        if (std::find(order.begin(), order.end(), i) == order.end())
            order.push_back(i);

    std::vector<Face> faces;
    std::vector<PotentialPtr> pots;
    for (int idx : order) {
        const Vector& alpha = rs.roots[idx];
        Face f;
        f.normal = alpha / alpha.norm();
        f.offset = 0.0;
        f.potential_id = static_cast<int>(pots.size());
        f.label = "alpha" + root_label(alpha);
        faces.push_back(std::move(f));
        // -k log(alpha.y) = -k log(u) - k log|alpha| on the unit-normal gap
        // u = y.alpha/|alpha|; the additive constant affects nothing.
        pots.push_back(std::make_shared<LogBarrier>(rs.multiplicity[idx]));
    }

    // Canonical strictly interior start.
    Vector x0;
    const int dim = rs.ambient_dim;
    if (rs.name.size() && rs.name[0] == 'A') {
        x0 = Vector(dim);
        for (int i = 0; i < dim; ++i) x0[i] = dim - 1 - i;
    } else if (rs.name.size() && (rs.name[0] == 'B' || rs.name[0] == 'D')) {
        x0 = Vector(dim);
        for (int i = 0; i < dim; ++i) x0[i] = dim - i;
        if (rs.name[0] == 'D') x0[dim - 1] = 0.5;
    } else {
        // The witness lies in the open chamber; rescale so the closest wall
        // sits at unit distance (all offsets are zero, so scaling is exact).
        double min_gap = kInf;
        for (const Face& f : faces) min_gap = std::min(min_gap, f.normal.dot(rs.witness));
        x0 = rs.witness / min_gap;
    }

    return PolyhedralModel("dunkl_" + rs.name,
                           PolyhedralDomain(dim, std::move(faces)),
                           std::move(pots), std::move(x0));
}

}  // namespace chamber
