#include "eot/costs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "detail_simplex.hpp"
#include "eot/rng.hpp"

namespace eot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPsdRelTol = 1e-10;

bool psd_within_tol(const SymMat& m) {
    return min_eigenvalue(m) >= -kPsdRelTol * std::max(m.norm(), 1e-300);
}

// Water-filling level: the m >= 0 with sum_i (lam_i - m)_+ = target, assuming
// sum_i (lam_i)_+ > target. Eigenvalue count is at most 3.
double waterfill_level(const SymEigen& e, double target) {
    for (int k = 1; k <= e.d; ++k) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += e.val[i];
        const double m = (s - target) / k;
        const double lo = (k < e.d) ? std::max(e.val[k], 0.0) : 0.0;
        if (m >= lo - 1e-15 && m <= e.val[k - 1] + 1e-15) return std::max(m, 0.0);
    }
    return 0.0;
}

// Rebuilds a 2x2 symmetric matrix from spectral values s1 >= s2 relative to
// the eigenbasis of m (mean/radius form); avoids the full decomposition.
SymMat rebuild_2x2(const SymMat& m, double mean, double radius, double s1, double s2) {
    SymMat out(2);
    const double avg = 0.5 * (s1 + s2);
    out.set(0, 0, avg);
    out.set(1, 1, avg);
    if (radius > 1e-300) {
        const double c = 0.5 * (s1 - s2) / radius;
        out.add(0, 0, c * (m(0, 0) - mean));
        out.add(1, 1, c * (m(1, 1) - mean));
        out.set(0, 1, c * m(0, 1));
    }
    return out;
}

SymMat combine(const std::vector<SymMat>& gen, const std::vector<double>& theta) {
    SymMat g(gen[0].dim());
    for (std::size_t k = 0; k < gen.size(); ++k) g += theta[k] * gen[k];
    return g;
}

// max over the simplex of lambda_min(G_theta - b), by projected
// supergradient ascent. Nonnegative at the optimum iff b lies under some
// convex combination of the generators, i.e. iff T(b) <= 1.
double custom_feasibility_margin(const std::vector<SymMat>& gen, const SymMat& b,
                                 std::vector<double>* theta_out = nullptr) {
    const std::size_t nk = gen.size();
    std::vector<double> theta(nk, 1.0 / static_cast<double>(nk));
    std::vector<double> best_theta = theta;
    double best = -kInf;
    double scale = b.norm();
    for (const SymMat& g : gen) scale = std::max(scale, g.norm());
    scale = std::max(scale, 1e-12);
    for (int it = 1; it <= 400; ++it) {
        const SymMat diff = combine(gen, theta) - b;
        const SymEigen e = sym_eigen(diff);
        const double margin = e.val[e.d - 1];
        if (margin > best) {
            best = margin;
            best_theta = theta;
        }
        const auto& v = e.vec[e.d - 1];
        const double step = 0.5 * scale / std::sqrt(static_cast<double>(it));
        for (std::size_t k = 0; k < nk; ++k) {
            double quad = 0.0;
            const int d = gen[k].dim();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) quad += v[i] * gen[k](std::min(i, j), std::max(i, j)) * v[j];
            theta[k] += step * quad / (scale * scale);
        }
        detail::project_simplex(theta, 1.0);
    }
    if (theta_out) *theta_out = best_theta;
    return best;
}

}  // namespace

Cost Cost::custom(std::vector<SymMat> generators) {
    if (generators.empty()) throw std::invalid_argument("custom cost: empty generating set");
    const int d = generators[0].dim();
    for (const SymMat& g : generators) {
        if (g.dim() != d)
            throw std::invalid_argument("custom cost: generators of mixed dimension");
    }
    Cost c(CostVariant::Custom);
    c.generators_ = std::move(generators);
    return c;
}

Cost Cost::parse(const std::string& name) {
    if (name == "trace") return trace();
    if (name == "scaled_identity") return scaled_identity();
    if (name == "max_eigen") return max_eigen();
    if (name.rfind("custom:", 0) == 0) return custom(read_generators(name.substr(7)));
    throw std::invalid_argument("unknown cost '" + name + "'");
}

std::string Cost::name() const {
    switch (variant_) {
        case CostVariant::Trace: return "trace";
        case CostVariant::ScaledIdentity: return "scaled_identity";
        case CostVariant::MaxEigen: return "max_eigen";
        default: return "custom";
    }
}

double Cost::value(const SymMat& m) const {
    const double psd_tol = kPsdRelTol * std::max(m.norm(), 1e-300);
    switch (variant_) {
        case CostVariant::Trace:
            return psd_within_tol(m) ? std::max(m.trace(), 0.0) : kInf;
        case CostVariant::ScaledIdentity: {
            const int d = m.dim();
            const double t = m.trace() / d;
            SymMat residual = m - t * SymMat::identity(d);
            if (residual.norm() > psd_tol || t < -psd_tol) return kInf;
            return std::max(t, 0.0);
        }
        case CostVariant::MaxEigen:
            return psd_within_tol(m) ? std::max(max_eigenvalue(m), 0.0) : kInf;
        default: {
            if (!psd_within_tol(m)) return kInf;
            double best = -kInf;
            for (const SymMat& g : generators_) best = std::max(best, g.dot(m));
            return std::max(best, 0.0);
        }
    }
}

double Cost::support(const SymMat& a) const {
    switch (variant_) {
        case CostVariant::Trace:
            return max_eigenvalue(a);
        case CostVariant::ScaledIdentity:
            return a.trace();
        case CostVariant::MaxEigen: {
            const SymEigen e = sym_eigen(a);
            double s = 0.0;
            for (int k = 0; k < e.d; ++k) s += std::max(e.val[k], 0.0);
            return s;
        }
        default: {
            // No closed form; bracket the homogeneity scale s with
            // T(a / s) <= 1 and bisect. Values <= 0 are reported as 0.
            if (custom_feasibility_margin(generators_, a * 1e9) >= 0.0) return 0.0;
            double lo = 1e-9, hi = 1.0;
            while (custom_feasibility_margin(generators_, a * (1.0 / hi)) < 0.0) {
                hi *= 2.0;
                if (hi > 1e12) return kInf;
            }
            for (int it = 0; it < 60 && hi - lo > 1e-10 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (custom_feasibility_margin(generators_, a * (1.0 / mid)) >= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            return hi;
        }
    }
}

bool Cost::dual_feasible(const SymMat& a, double tol) const {
    if (tol < 0.0) throw std::invalid_argument("dual_feasible: negative tolerance");
    if (variant_ == CostVariant::Custom)
        return custom_feasibility_margin(generators_, a) >= -tol;
    return support(a) <= 1.0 + tol;
}

SymMat Cost::prox(const SymMat& v, double tau) const {
    if (tau < 0.0) throw std::invalid_argument("prox: negative step");
    const int d = v.dim();
    // The 1x1 case degenerates to soft shrinkage for all closed-form costs.
    if (d == 1 && variant_ != CostVariant::Custom) {
        SymMat out(1);
        out.set(0, 0, std::max(v(0, 0) - tau, 0.0));
        return out;
    }
    switch (variant_) {
        case CostVariant::Trace: {
            if (d == 2) {
                const double mean = 0.5 * (v(0, 0) + v(1, 1));
                const double radius = std::hypot(0.5 * (v(0, 0) - v(1, 1)), v(0, 1));
                return rebuild_2x2(v, mean, radius, std::max(mean + radius - tau, 0.0),
                                   std::max(mean - radius - tau, 0.0));
            }
            SymEigen e = sym_eigen(v);
            for (int k = 0; k < e.d; ++k) e.val[k] = std::max(e.val[k] - tau, 0.0);
            return sym_from_eigen(e);
        }
        case CostVariant::ScaledIdentity: {
            const double t = std::max((v.trace() - tau) / d, 0.0);
            return t * SymMat::identity(d);
        }
        case CostVariant::MaxEigen: {
            if (d == 2) {
                const double mean = 0.5 * (v(0, 0) + v(1, 1));
                const double radius = std::hypot(0.5 * (v(0, 0) - v(1, 1)), v(0, 1));
                const double l1 = mean + radius, l2 = mean - radius;
                const double pos = std::max(l1, 0.0) + std::max(l2, 0.0);
                double level = 0.0;
                if (pos > tau) {
                    level = l1 - tau;  // only the top eigenvalue clipped
                    if (level < std::max(l2, 0.0)) level = std::max(0.5 * (l1 + l2 - tau), 0.0);
                }
                return rebuild_2x2(v, mean, radius, std::clamp(l1, 0.0, level),
                                   std::clamp(l2, 0.0, level));
            }
            SymEigen e = sym_eigen(v);
            double pos = 0.0;
            for (int k = 0; k < e.d; ++k) pos += std::max(e.val[k], 0.0);
            const double level = pos > tau ? waterfill_level(e, tau) : 0.0;
            for (int k = 0; k < e.d; ++k) e.val[k] = std::clamp(e.val[k], 0.0, level);
            return sym_from_eigen(e);
        }
        default: {
            // Projected subgradient on tau * f + half squared distance.
            SymMat lam = psd_projection(v);
            SymMat best = lam;
            double best_obj = tau * value(best) + 0.5 * (best - v).dot(best - v);
            for (int it = 1; it <= 50; ++it) {
                int kmax = 0;
                double fmax = -kInf;
                for (std::size_t k = 0; k < generators_.size(); ++k) {
                    const double fv = generators_[k].dot(lam);
                    if (fv > fmax) {
                        fmax = fv;
                        kmax = static_cast<int>(k);
                    }
                }
                SymMat grad = tau * generators_[kmax] + (lam - v);
                lam = psd_projection(lam - (1.0 / it) * grad);
                const double obj = tau * value(lam) + 0.5 * (lam - v).dot(lam - v);
                if (obj < best_obj) {
                    best_obj = obj;
                    best = lam;
                }
            }
            return best;
        }
    }
}

SymMat Cost::project_dual(const SymMat& a) const {
    switch (variant_) {
        case CostVariant::Trace: {
            SymEigen e = sym_eigen(a);
            for (int k = 0; k < e.d; ++k) e.val[k] = std::min(e.val[k], 1.0);
            return sym_from_eigen(e);
        }
        case CostVariant::ScaledIdentity: {
            const int d = a.dim();
            const double excess = std::max(a.trace() - 1.0, 0.0);
            return a - (excess / d) * SymMat::identity(d);
        }
        case CostVariant::MaxEigen: {
            SymEigen e = sym_eigen(a);
            double pos = 0.0;
            for (int k = 0; k < e.d; ++k) pos += std::max(e.val[k], 0.0);
            if (pos <= 1.0) return a;
            const double theta = waterfill_level(e, 1.0);
            for (int k = 0; k < e.d; ++k) {
                if (e.val[k] > 0.0) e.val[k] = std::max(e.val[k] - theta, 0.0);
            }
            return sym_from_eigen(e);
        }
        default: {
            // Minimize ||(a - G_theta)_+||^2 over the simplex, then drop the
            // remaining excess.
            const std::size_t nk = generators_.size();
            std::vector<double> theta(nk, 1.0 / static_cast<double>(nk));
            double lips = 1e-12;
            for (const SymMat& g : generators_) lips += 2.0 * g.dot(g);
            std::vector<double> best_theta = theta;
            double best_obj = kInf;
            for (int it = 0; it < 300; ++it) {
                const SymMat excess = psd_projection(a - combine(generators_, theta));
                const double obj = excess.dot(excess);
                if (obj < best_obj) {
                    best_obj = obj;
                    best_theta = theta;
                }
                for (std::size_t k = 0; k < nk; ++k)
                    theta[k] += (2.0 / lips) * excess.dot(generators_[k]);
                detail::project_simplex(theta, 1.0);
            }
            return a - psd_projection(a - combine(generators_, best_theta));
        }
    }
}

SymMat Cost::project_domain(const SymMat& m) const {
    if (variant_ == CostVariant::ScaledIdentity) {
        const int d = m.dim();
        return std::max(m.trace() / d, 0.0) * SymMat::identity(d);
    }
    return psd_projection(m);
}

std::pair<double, double> Cost::sample_growth_bounds(int samples, std::uint64_t seed) const {
    Rng rng(seed);
    const int d = variant_ == CostVariant::Custom ? generators_[0].dim() : 2;
    double min_coercivity = kInf;
    double max_growth = 0.0;
    for (int s = 0; s < samples; ++s) {
        SymMat m(d);
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) m.set(i, j, rng.uniform(-1.0, 1.0));
        m = psd_projection(m);
        if (variant_ == CostVariant::ScaledIdentity) m = (m.trace() / d) * SymMat::identity(d);
        const double nm = m.norm();
        if (nm < 1e-12) continue;
        const double f = value(m);
        min_coercivity = std::min(min_coercivity, f / nm);
        if (m.trace() > 1e-12) max_growth = std::max(max_growth, f / m.trace());
    }
    return {min_coercivity, max_growth};
}

std::vector<SymMat> read_generators(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cost generators: cannot open " + path);
    std::vector<SymMat> gens;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int d = 0;
        if (!(ls >> d)) continue;
        if (d < 1 || d > 3) throw std::runtime_error("cost generators: dimension must be 1..3");
        SymMat g(d);
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                double v;
                if (!(ls >> v)) throw std::runtime_error("cost generators: truncated row");
                g.set(i, j, v);
            }
        }
        gens.push_back(g);
    }
    if (gens.empty()) throw std::runtime_error("cost generators: no rows in " + path);
    return gens;
}

}  // namespace eot
