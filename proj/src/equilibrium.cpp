#include "dynnull/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "dynnull/errors.hpp"

namespace dynnull {

namespace {

constexpr double kSingularDeterminant = 1e-12;
constexpr double kDuplicateDistance = 1e-8;
constexpr double kNegativeRoundoff = 1e-12;

}  // namespace

std::string_view to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::saddle: return "saddle";
        case Stability::nonhyperbolic: return "nonhyperbolic";
    }
    return "unknown";
}

Matrix jacobian(const SystemSpec& spec, std::span<const double> v) {
    const std::size_t n = spec.size();
    if (v.size() != n) throw ArgumentError("state does not match species count");

    Matrix jac{n, std::vector<double>(n * n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        const double r = spec.growth_rate[i];
        const double k = spec.capacity[i];
        double load = 2.0 * v[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            load += spec.gamma(i, j) * v[j];
            jac(i, j) = -r * v[i] * spec.gamma(i, j) / k;
        }
        jac(i, i) = r * (1.0 - load / k);
    }
    return jac;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
    using C = std::complex<double>;
    if (m.n == 0) return {};
    if (m.n == 1) return {C(m(0, 0), 0.0)};
    if (m.n == 2) {
        const double tr = m(0, 0) + m(1, 1);
        const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const double disc = tr * tr / 4.0 - det;
        if (disc >= 0.0) {
            const double root = std::sqrt(disc);
            // Avoid cancellation in the smaller-magnitude root.
            const double big = tr / 2.0 + std::copysign(root, tr);
            const double small = big != 0.0 ? det / big : 0.0;
            std::vector<C> out{C(big, 0.0), C(small, 0.0)};
            std::sort(out.begin(), out.end(),
                      [](const C& a, const C& b) { return a.real() < b.real(); });
            return out;
        }
        const double im = std::sqrt(-disc);
        return {C(tr / 2.0, -im), C(tr / 2.0, im)};
    }

    Eigen::MatrixXd a(m.n, m.n);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) a(i, j) = m(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw ArgumentError("eigenvalue iteration did not converge");
    std::vector<C> out;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()[i]);
    std::sort(out.begin(), out.end(), [](const C& a, const C& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

Stability classify_stability(std::span<const std::complex<double>> eigenvalues) {
    bool negative = false;
    bool positive = false;
    for (const auto& ev : eigenvalues) {
        const double re = ev.real();
        if (std::abs(re) <= kHyperbolicityThreshold) return Stability::nonhyperbolic;
        (re < 0.0 ? negative : positive) = true;
    }
    if (negative && positive) return Stability::saddle;
    return positive ? Stability::unstable : Stability::stable;
}

EquilibriumReport fixed_points(const SystemSpec& spec) {
    validate(spec);
    const std::size_t n = spec.size();
    if (n > kMaxEnumerationSpecies)
        throw SizeError("fixed point enumeration supports at most " +
                        std::to_string(kMaxEnumerationSpecies) + " species");

    EquilibriumReport report{spec, {}, false};
    std::vector<Volumes> found;

    const std::size_t subsets = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) members.push_back(i);

        Volumes v(n, 0.0);
        if (!members.empty()) {
            const auto m = static_cast<Eigen::Index>(members.size());
            Eigen::MatrixXd a(m, m);
            Eigen::VectorXd rhs(m);
            for (Eigen::Index p = 0; p < m; ++p) {
                for (Eigen::Index q = 0; q < m; ++q) a(p, q) = spec.gamma(members[p], members[q]);
                rhs(p) = spec.capacity[members[p]];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
            if (std::abs(lu.determinant()) < kSingularDeterminant) {
                report.degenerate = true;
                continue;
            }
            const Eigen::VectorXd sol = lu.solve(rhs);
            bool admissible = true;
            for (Eigen::Index p = 0; p < m; ++p) {
                if (!(sol(p) >= -kNegativeRoundoff)) admissible = false;
                v[members[p]] = std::max(sol(p), 0.0);
            }
            if (!admissible) continue;
        }

        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Volumes& other) {
            return sup_distance(other, v) <= kDuplicateDistance;
        });
        if (duplicate) continue;
        found.push_back(v);

        FixedPoint fp;
        fp.v = v;
        for (std::size_t i = 0; i < n; ++i)
            if (v[i] > 0.0) fp.support.push_back(i);
        fp.eigenvalues = eigenvalues(jacobian(spec, v));
        fp.stability = classify_stability(fp.eigenvalues);
        report.points.push_back(std::move(fp));
    }
    return report;
}

std::optional<double> time_to_equilibrium(const Trajectory& traj, std::span<const double> target,
                                          double epsilon) {
    if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be > 0");
    if (target.size() != traj.species()) throw ArgumentError("target does not match species count");

    const double tail_start = traj.t_end() - 0.1 * (traj.t_end() - traj.t0());
    std::size_t k = traj.size();
    while (k > 0 && sup_distance(traj[k - 1], target) <= epsilon) --k;
    if (k == traj.size()) return std::nullopt;
    if (traj.time_at(k) > tail_start) return std::nullopt;
    return traj.time_at(k);
}

const FixedPoint& nearest_fixed_point(const EquilibriumReport& report, std::span<const double> v) {
    const FixedPoint* best = &report.points.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& fp : report.points) {
        const double d = sup_distance(fp.v, v);
        if (d < best_d) {
            best_d = d;
            best = &fp;
        }
    }
    return *best;
}

}  // namespace dynnull
