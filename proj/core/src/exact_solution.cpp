#include "stretchlab/exact_solution.hpp"

#include <cmath>

#include "stretchlab/errors.hpp"

namespace stretchlab {

CylComponents cyl_components(const InitialField& b0) {
    auto eval = b0.evaluate;
    auto sample = [eval](double r, double theta, double z) {
        const Vec3 p{r * std::cos(theta), r * std::sin(theta), z};
        return vector_to_cylindrical(p, eval(p));
    };
    CylComponents c;
    c.br = [sample](double r, double th, double z) { return sample(r, th, z).r_comp; };
    c.btheta = [sample](double r, double th, double z) {
        return sample(r, th, z).theta_comp;
    };
    c.bz = [sample](double r, double th, double z) { return sample(r, th, z).z_comp; };
    return c;
}

ExactSolution::ExactSolution(double alpha, CylComponents b0)
    : alpha_(alpha), b0_(std::move(b0)) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ValidationError("ExactSolution: alpha must be in (0, 1]");
    }
}

ExactSolution::ExactSolution(double alpha, const InitialField& b0)
    : ExactSolution(alpha, cyl_components(b0)) {}

CylVec ExactSolution::at_cyl(double t, const CylPoint& q) const {
    if (!(q.r > 0.0 && q.r < 1.0)) {
        throw OutOfDomainError("ExactSolution: valid only for 0 < r < 1");
    }
    const double rate = std::pow(q.r, alpha_ - 1.0);
    const double theta0 = q.theta - rate * t;
    const double br = b0_.br(q.r, theta0, q.z);
    const double bth = b0_.btheta(q.r, theta0, q.z);
    const double bz = b0_.bz(q.r, theta0, q.z);
    return {br, bth - (1.0 - alpha_) * rate * t * br, bz};
}

Vec3 ExactSolution::at(double t, const Vec3& x) const {
    const CylPoint q = to_cylindrical(x);
    return vector_from_cylindrical(q, at_cyl(t, q));
}

CylVec ExactSolution::transport_residual(double t, const CylPoint& q, double h_t,
                                         double h_theta) const {
    if (!(q.r > 0.0 && q.r < 1.0)) {
        throw OutOfDomainError("transport_residual: valid only for 0 < r < 1");
    }
    const double rate = std::pow(q.r, alpha_ - 1.0);

    const CylVec tp = at_cyl(t + h_t, q);
    const CylVec tm = at_cyl(t - h_t, q);
    const CylVec ap = at_cyl(t, {q.r, q.theta + h_theta, q.z});
    const CylVec am = at_cyl(t, {q.r, q.theta - h_theta, q.z});
    const CylVec here = at_cyl(t, q);

    const double dt_br = (tp.r_comp - tm.r_comp) / (2.0 * h_t);
    const double dt_bth = (tp.theta_comp - tm.theta_comp) / (2.0 * h_t);
    const double dt_bz = (tp.z_comp - tm.z_comp) / (2.0 * h_t);
    const double da_br = (ap.r_comp - am.r_comp) / (2.0 * h_theta);
    const double da_bth = (ap.theta_comp - am.theta_comp) / (2.0 * h_theta);
    const double da_bz = (ap.z_comp - am.z_comp) / (2.0 * h_theta);

    return {dt_br + rate * da_br,
            dt_bth + rate * da_bth + (1.0 - alpha_) * rate * here.r_comp,
            dt_bz + rate * da_bz};
}

double blowup_envelope(double alpha, double t, double r, double br0_inf) {
    return (1.0 - alpha) * std::pow(r, alpha - 1.0) * t * br0_inf;
}

}  // namespace stretchlab
