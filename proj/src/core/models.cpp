#include "core/models.hpp"

#include <cmath>

namespace chamber {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInteriorMargin = 1e-9;
}  // namespace

PolyhedralModel::PolyhedralModel(std::string name, PolyhedralDomain domain,
                                 std::vector<PotentialPtr> potentials,
                                 Vector initial_point,
                                 std::vector<FaceSubset> monitored_subsets)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      potentials_(std::move(potentials)),
      initial_point_(std::move(initial_point)),
      monitored_(std::move(monitored_subsets)) {
    for (const Face& f : domain_.faces()) {
        if (f.potential_id < 0 ||
            f.potential_id >= static_cast<int>(potentials_.size()) ||
            !potentials_[f.potential_id])
            throw Error(ErrorCode::InvalidArgument,
                        "face potential id does not resolve: " + f.label);
    }
    if (initial_point_.size() != domain_.dimension())
        throw Error(ErrorCode::InvalidArgument,
                    "initial point dimension mismatch");
    const Vector g = domain_.gaps(initial_point_);
    if (!(g.minCoeff() >= kInteriorMargin))
        throw Error(ErrorCode::InvalidArgument,
                    "initial point is not strictly interior (min gap " +
                        std::to_string(g.minCoeff()) + ")");
    for (const FaceSubset& J : monitored_) J.check_range(domain_.num_faces());
    exposed_.resize(domain_.num_faces());
    for (int i = 0; i < domain_.num_faces(); ++i)
        exposed_[i] = domain_.face_exposed(i);
}

const BarrierPotential& PolyhedralModel::potential_for_face(int i) const {
    return *potentials_[domain_.face(i).potential_id];
}

Vector PolyhedralModel::drift(const Vector& x) const {
    Vector d = Vector::Zero(dimension());
    for (int i = 0; i < num_faces(); ++i) {
        const Face& f = domain_.face(i);
        const double u = f.normal.dot(x) - f.offset;
        d -= f.normal * deriv(potential_for_face(i), u);
    }
    return d;
}

PolyhedralModel PolyhedralModel::with_monitored(
    std::vector<FaceSubset> monitored) const {
    return PolyhedralModel(name_, domain_, potentials_, initial_point_,
                           std::move(monitored));
}

PolyhedralModel build_rost_vares(int n, PotentialPtr phi) {
    if (n < 2)
        throw Error(ErrorCode::InvalidArgument, "rost_vares needs n >= 2");
    if (!phi) throw Error(ErrorCode::InvalidArgument, "null potential");

    std::vector<PotentialPtr> pots{
        std::make_shared<ScaledArgument>(std::move(phi), kSqrt2)};
    std::vector<Face> faces;
    for (int i = 0; i + 1 < n; ++i) {
        Face f;
        f.normal = Vector::Zero(n);
        f.normal[i] = -1.0 / kSqrt2;
        f.normal[i + 1] = 1.0 / kSqrt2;
        f.offset = 0.0;
        f.potential_id = 0;
        f.label = "gap_" + std::to_string(i + 1) + "_" + std::to_string(i + 2);
        faces.push_back(std::move(f));
    }
    Vector x0(n);
    for (int i = 0; i < n; ++i) x0[i] = i;

    // Consecutive face pairs: the triple-collision edges.
    std::vector<FaceSubset> monitored;
    for (int i = 0; i + 2 < n; ++i) monitored.push_back(FaceSubset({i, i + 1}));

    return PolyhedralModel("rost_vares_n" + std::to_string(n),
                           PolyhedralDomain(n, std::move(faces)),
                           std::move(pots), std::move(x0), std::move(monitored));
}

PolyhedralModel build_wishart_radii(int n, double delta) {
    if (n < 2)
        throw Error(ErrorCode::InvalidArgument, "wishart needs n >= 2");
    if (delta < n)
        throw Error(ErrorCode::InvalidArgument,
                    "wishart needs delta >= n (repelling drift sign)");

    std::vector<PotentialPtr> pots;
    const double axis_gamma = 0.5 * (delta - n);
    if (axis_gamma > 0)
        pots.push_back(std::make_shared<LogBarrier>(axis_gamma));
    else
        pots.push_back(std::make_shared<ZeroPotential>());  // delta == n
    pots.push_back(std::make_shared<LogBarrier>(0.5));
    const int kAxis = 0, kPair = 1;

    std::vector<Face> faces;
    for (int i = 0; i < n; ++i) {
        Face f;
        f.normal = Vector::Zero(n);
        f.normal[i] = 1.0;
        f.potential_id = kAxis;
        f.label = "axis_" + std::to_string(i + 1);
        faces.push_back(std::move(f));
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Face diff;
            diff.normal = Vector::Zero(n);
            diff.normal[i] = -1.0 / kSqrt2;
            diff.normal[j] = 1.0 / kSqrt2;
            diff.potential_id = kPair;
            diff.label = "diff_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
            faces.push_back(std::move(diff));
            Face sum;
            sum.normal = Vector::Zero(n);
            sum.normal[i] = 1.0 / kSqrt2;
            sum.normal[j] = 1.0 / kSqrt2;
            sum.potential_id = kPair;
            sum.label = "sum_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
            faces.push_back(std::move(sum));
        }

    Vector x0(n);
    for (int i = 0; i < n; ++i) x0[i] = i + 1;

    return PolyhedralModel("wishart_radii_n" + std::to_string(n),
                           PolyhedralDomain(n, std::move(faces)),
                           std::move(pots), std::move(x0));
}

PolyhedralModel build_trigonometric(int n, double gamma) {
    if (n < 2)
        throw Error(ErrorCode::InvalidArgument, "trigonometric needs n >= 2");
    std::vector<PotentialPtr> pots{std::make_shared<TrigLogSin>(gamma)};

    std::vector<Face> faces;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Face f;
            f.normal = Vector::Zero(n);
            f.normal[i] = 1.0 / kSqrt2;
            f.normal[j] = -1.0 / kSqrt2;
            f.potential_id = 0;
            if (i > j) {  // direct separation x_i >= x_j
                f.offset = 0.0;
                f.label = "pair_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
            } else {  // wrap-around arc x_j <= x_i + 2*pi
                f.offset = -M_PI * kSqrt2;
                f.label = "wrap_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
            }
            faces.push_back(std::move(f));
        }

    Vector x0(n);
    for (int i = 0; i < n; ++i) x0[i] = 2.0 * M_PI * i / n;

    return PolyhedralModel("trigonometric_n" + std::to_string(n),
                           PolyhedralDomain(n, std::move(faces)),
                           std::move(pots), std::move(x0));
}

PolyhedralModel build_hyperbolic(int n, double gamma) {
    if (n < 2)
        throw Error(ErrorCode::InvalidArgument, "hyperbolic needs n >= 2");
    std::vector<PotentialPtr> pots{std::make_shared<HyperbolicLogSinh>(gamma)};

    std::vector<Face> faces;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            Face f;
            f.normal = Vector::Zero(n);
            f.normal[j] = -1.0 / kSqrt2;
            f.normal[k] = 1.0 / kSqrt2;
            f.potential_id = 0;
            f.label = "pair_" + std::to_string(j + 1) + "_" + std::to_string(k + 1);
            faces.push_back(std::move(f));
        }

    Vector x0(n);
    for (int i = 0; i < n; ++i) x0[i] = i;

    return PolyhedralModel("hyperbolic_n" + std::to_string(n),
                           PolyhedralDomain(n, std::move(faces)),
                           std::move(pots), std::move(x0));
}

PolyhedralModel build_custom(std::string name, int dimension,
                             std::vector<CustomFaceSpec> specs, Vector initial,
                             std::vector<FaceSubset> monitored,
                             bool normalize_normals) {
    std::vector<Face> faces;
    std::vector<PotentialPtr> pots;
    for (size_t i = 0; i < specs.size(); ++i) {
        CustomFaceSpec& s = specs[i];
        if (!s.potential)
            throw Error(ErrorCode::InvalidArgument, "face without potential");
        Face f;
        const double norm = s.normal.norm();
        if (normalize_normals) {
            if (norm < 1e-300)
                throw Error(ErrorCode::InvalidArgument, "zero face normal");
            // Rescaling n changes the potential argument: phi(x.n - a) with
            // n/|n| needs phi(|n| u) to keep the same barrier.
            f.normal = s.normal / norm;
            f.offset = s.offset / norm;
            pots.push_back(norm == 1.0
                               ? s.potential
                               : std::make_shared<ScaledArgument>(s.potential, norm));
        } else {
            f.normal = s.normal;
            f.offset = s.offset;
            pots.push_back(s.potential);
        }
        f.potential_id = static_cast<int>(i);
        f.label = s.label.empty() ? "face_" + std::to_string(i + 1) : s.label;
        faces.push_back(std::move(f));
    }
    return PolyhedralModel(std::move(name),
                           PolyhedralDomain(dimension, std::move(faces)),
                           std::move(pots), std::move(initial),
                           std::move(monitored));
}

PolyhedralModel build_half_line(PotentialPtr phi, double x0) {
    CustomFaceSpec s;
    s.normal = Vector::Ones(1);
    s.offset = 0.0;
    s.potential = std::move(phi);
    s.label = "wall";
    Vector init(1);
    init[0] = x0;
    return build_custom("half_line", 1, {std::move(s)}, std::move(init));
}

}  // namespace chamber
