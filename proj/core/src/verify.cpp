#include "phaseport/verify.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include "phaseport/classifier.hpp"
#include "phaseport/compactify.hpp"
#include "phaseport/sampling.hpp"
#include "phaseport/singular.hpp"

namespace phaseport {

std::string SuiteResult::summary() const {
    std::ostringstream os;
    os << name << ": " << (passed() ? "PASS" : "FAIL") << " (" << checked << " checked";
    if (!failures.empty()) {
        os << ", " << failures.size() << " failures; first at " << failures.front().first.to_string()
           << ": " << failures.front().second;
    }
    os << ")";
    return os.str();
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PHASEPORT_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = resolve_thread_count(threads);
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> cursor{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                int i = cursor.fetch_add(1);
                if (i >= n) return;
                body(i);
            }
        });
    for (auto& th : pool) th.join();
}

namespace {

using Failure = std::pair<KolmogorovParams, std::string>;

SuiteResult run_over_draws(const std::string& name, uint64_t seed, int draws, int threads,
                           const std::function<std::string(const KolmogorovParams&)>& check) {
    DrawGenerator gen(seed);
    std::vector<KolmogorovParams> params;
    params.reserve(draws);
    for (int i = 0; i < draws; ++i) params.push_back(gen.next());

    std::vector<std::string> errors(draws);
    parallel_for(draws, threads, [&](int i) {
        try {
            errors[i] = check(params[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    SuiteResult result;
    result.name = name;
    result.checked = draws;
    for (int i = 0; i < draws; ++i)
        if (!errors[i].empty()) result.failures.push_back({params[i], errors[i]});
    return result;
}

std::string type_mismatch(const KolmogorovParams& k) {
    FiniteClassification closed = classify_finite_closed_form(k);
    std::vector<SingularPoint> generic = classify_finite_generic(k);
    if (closed.types.size() != generic.size())
        return "point count differs: table row " + closed.subcase + " lists " +
               std::to_string(closed.types.size()) + ", generic pipeline found " +
               std::to_string(generic.size());
    for (const auto& [labels, want] : closed.types) {
        const SingularPoint* found = nullptr;
        for (const auto& p : generic) {
            bool all = p.labels.size() == labels.size();
            for (const auto& l : labels)
                if (!p.has_label(l)) all = false;
            if (all) {
                found = &p;
                break;
            }
        }
        if (!found) return "generic pipeline does not produce point " + labels.front();
        if (found->type != want)
            return "row " + closed.subcase + " point " + found->label_string() + ": generic '" +
                   local_type_name(found->type) + "' vs table '" + local_type_name(want) + "'";
    }
    return {};
}

// plane-field RK4 with fixed steps; both systems of a mirror pair take the
// identical step sequence, which is what the trajectory comparison needs
struct PlaneOrbit {
    std::vector<std::array<double, 2>> pts;
};

PlaneOrbit integrate_plane(const KolmogorovParams& k, double x0, double z0, double h, int steps,
                           int sign) {
    PlanarSystem sys = build_system(k);
    auto f = [&](double x, double z, double& fx, double& fz) {
        fx = sign * poly_eval(sys.p, x, z);
        fz = sign * poly_eval(sys.q, x, z);
    };
    PlaneOrbit orbit;
    double x = x0, z = z0;
    orbit.pts.push_back({x, z});
    for (int i = 0; i < steps; ++i) {
        double k1x, k1z, k2x, k2z, k3x, k3z, k4x, k4z;
        f(x, z, k1x, k1z);
        f(x + 0.5 * h * k1x, z + 0.5 * h * k1z, k2x, k2z);
        f(x + 0.5 * h * k2x, z + 0.5 * h * k2z, k3x, k3z);
        f(x + h * k3x, z + h * k3z, k4x, k4z);
        x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
        z += h / 6 * (k1z + 2 * k2z + 2 * k3z + k4z);
        orbit.pts.push_back({x, z});
        if (!std::isfinite(x) || !std::isfinite(z) || std::abs(x) > 50 || std::abs(z) > 50) break;
    }
    return orbit;
}

std::string mirror_mismatch(const PlaneOrbit& a, const PlaneOrbit& b, double sx, double sz,
                            const char* what) {
    size_t n = std::min(a.pts.size(), b.pts.size());
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(a.pts[i][0]) > 20 || std::abs(a.pts[i][1]) > 20) break;  // blow-up guard
        double dx = std::abs(a.pts[i][0] - sx * b.pts[i][0]);
        double dz = std::abs(a.pts[i][1] - sz * b.pts[i][1]);
        if (dx > 1e-8 || dz > 1e-8)
            return std::string(what) + " mirror deviates by " + std::to_string(std::max(dx, dz)) +
                   " at step " + std::to_string(i);
    }
    return {};
}

// printed blow-up chain systems, straight from the published coefficients
PlanarSystem printed_eq9(const KolmogorovParams& k) {
    Poly2 u = Poly2::var(Var::First), w = Poly2::var(Var::Second);
    PlanarSystem s;
    s.p = u.pow(3) * w * w * (k.c0 - k.a0) + u.pow(3) * w * (k.c3 * (k.mu + 1)) +
          u.pow(3) * (k.c2 * (k.mu + 1)) + u * u * w * (k.c1 * (k.mu + 1));
    s.q = u * u * w.pow(3) * (-k.c0) + u * u * w * w * (-k.c3) + u * u * w * (-k.c2) +
          u * w * w * (-k.c1);
    s.var_names = {"u", "w1"};
    return s;
}

PlanarSystem printed_eq10(const KolmogorovParams& k) {
    Poly2 u = Poly2::var(Var::First), w = Poly2::var(Var::Second);
    PlanarSystem s;
    s.p = u * u * w * w * (k.c0 - k.a0) + u * u * w * (k.c3 * (k.mu + 1)) +
          u * u * (k.c2 * (k.mu + 1)) + u * w * (k.c1 * (k.mu + 1));
    s.q = u * w.pow(3) * (-k.c0) + u * w * w * (-k.c3) + u * w * (-k.c2) + w * w * (-k.c1);
    s.var_names = {"u", "w1"};
    return s;
}

PlanarSystem printed_eq11(const KolmogorovParams& k) {
    Poly2 u = Poly2::var(Var::First), w = Poly2::var(Var::Second);
    PlanarSystem s;
    s.p = u.pow(4) * w * w * (k.c0 - k.a0) + u.pow(3) * w * (k.c3 * (k.mu + 1)) +
          u * u * (k.c2 * (k.mu + 1)) + u * u * w * (k.c1 * (k.mu + 1));
    s.q = u.pow(3) * w.pow(3) * (k.a0 - 2 * k.c0) + u * u * w * w * (-k.c3 * (k.mu + 2)) +
          u * w * w * (-k.c1 * (k.mu + 2)) + u * w * (-k.c2 * (k.mu + 2));
    s.var_names = {"u", "w2"};
    return s;
}

PlanarSystem printed_eq12(const KolmogorovParams& k) {
    Poly2 u = Poly2::var(Var::First), w = Poly2::var(Var::Second);
    PlanarSystem s;
    s.p = u.pow(3) * w * w * (k.c0 - k.a0) + u * u * w * (k.c3 * (k.mu + 1)) +
          u * (k.c2 * (k.mu + 1)) + u * w * (k.c1 * (k.mu + 1));
    s.q = u * u * w.pow(3) * (k.a0 - 2 * k.c0) + u * w * w * (-k.c3 * (k.mu + 2)) +
          w * w * (-k.c1 * (k.mu + 2)) + w * (-k.c2 * (k.mu + 2));
    s.var_names = {"u", "w2"};
    return s;
}

PlanarSystem printed_eq13(const KolmogorovParams& k) {
    // mu = -2
    Poly2 u = Poly2::var(Var::First), w = Poly2::var(Var::Second);
    PlanarSystem s;
    s.p = u * u * w * w * (k.c0 - k.a0) + u * w * (-k.c3) + Poly2::constant(-k.c2) + w * (-k.c1);
    s.q = u * w.pow(3) * (k.a0 - 2 * k.c0);
    s.var_names = {"u", "w2"};
    return s;
}

PlanarSystem printed_eq14(const KolmogorovParams& k) {
    // c1 = 0 chain after cancelling u^2
    Poly2 u = Poly2::var(Var::First), w = Poly2::var(Var::Second);
    PlanarSystem s;
    s.p = u * w * w * (k.c0 - k.a0) + u * w * (k.c3 * (k.mu + 1)) + u * (k.c2 * (k.mu + 1));
    s.q = w.pow(3) * (-k.c0) + w * w * (-k.c3) + w * (-k.c2);
    s.var_names = {"u", "w1"};
    return s;
}

PlanarSystem printed_u1(const KolmogorovParams& k) {
    Poly2 u = Poly2::var(Var::First), v = Poly2::var(Var::Second);
    PlanarSystem s;
    s.p = u.pow(3) * (k.c2 * (k.mu + 1)) + u * u * v * (k.c3 * (k.mu + 1)) +
          u * v * v * (k.c0 - k.a0) + u * v * (k.c1 * (k.mu + 1));
    s.q = u * u * v * (k.c2 * k.mu) + u * v * v * (k.c3 * k.mu) + v.pow(3) * (-k.a0) +
          v * v * (k.c1 * k.mu);
    s.var_names = {"u", "v"};
    return s;
}

PlanarSystem printed_u2(const KolmogorovParams& k) {
    Poly2 u = Poly2::var(Var::First), v = Poly2::var(Var::Second);
    PlanarSystem s;
    s.p = u * u * v * (-k.c1 * (k.mu + 1)) + u * v * v * (k.a0 - k.c0) +
          u * v * (-k.c3 * (k.mu + 1)) + u * (-k.c2 * (k.mu + 1));
    s.q = u * v * v * (-k.c1) + v.pow(3) * (-k.c0) + v * v * (-k.c3) + v * (-k.c2);
    s.var_names = {"u", "v"};
    return s;
}

std::string blowup_chain_mismatch(const KolmogorovParams& draw, int variant) {
    KolmogorovParams k = draw;
    if (variant % 4 == 1) k.mu = -2;      // exercise the dicritical branch
    if (variant % 4 == 2) k.c1 = 0;       // exercise the c1 = 0 branch
    if (sgn(k.apc()) == 0) return {};     // stepped outside H; skip silently
    if (k.mu == -1) return {};

    PlanarSystem sys = build_system(k);
    ChartSystem u1 = to_chart(sys, ChartId::U1);
    if (!(u1.system.p == printed_u1(k).p) || !(u1.system.q == printed_u1(k).q))
        return "U1 chart differs from the printed system";
    ChartSystem u2 = to_chart(sys, ChartId::U2);
    if (!(u2.system.p == printed_u2(k).p) || !(u2.system.q == printed_u2(k).q))
        return "U2 chart differs from the printed system";

    PlanarSystem sub1 = blowup_substitution(u1.system);
    if (!(sub1.p == printed_eq9(k).p) || !(sub1.q == printed_eq9(k).q))
        return "first substitution differs from the printed chain";

    if (sgn(k.c1) == 0) {
        auto [reduced, cancelled] = vertical_blowup(u1.system);
        if (cancelled != 2) return "c1=0 branch should cancel u^2, cancelled u^" +
                                   std::to_string(cancelled);
        if (!(reduced.p == printed_eq14(k).p) || !(reduced.q == printed_eq14(k).q))
            return "c1=0 reduced system differs from the printed chain";
        return {};
    }

    auto [first, cancel1] = vertical_blowup(u1.system);
    if (cancel1 != 1) return "first blow-up should cancel u, cancelled u^" + std::to_string(cancel1);
    if (!(first.p == printed_eq10(k).p) || !(first.q == printed_eq10(k).q))
        return "first reduced system differs from the printed chain";

    PlanarSystem sub2 = blowup_substitution(first);
    if (!(sub2.p == printed_eq11(k).p) || !(sub2.q == printed_eq11(k).q))
        return "second substitution differs from the printed chain";

    auto [second, cancel2] = vertical_blowup(first);
    if (k.mu == -2) {
        if (cancel2 != 2) return "dicritical blow-up should cancel u^2";
        if (!(second.p == printed_eq13(k).p) || !(second.q == printed_eq13(k).q))
            return "dicritical system differs from the printed chain";
    } else {
        if (cancel2 != 1) return "nondicritical blow-up should cancel u";
        if (!(second.p == printed_eq12(k).p) || !(second.q == printed_eq12(k).q))
            return "second reduced system differs from the printed chain";
    }
    return {};
}

}  // namespace

SuiteResult suite_oracle_equivalence(uint64_t seed, int draws, int threads) {
    return run_over_draws("oracle-equivalence", seed, draws, threads, type_mismatch);
}

SuiteResult suite_poincare_hopf(uint64_t seed, int draws, int threads) {
    return run_over_draws("poincare-hopf", seed, draws, threads,
                          [](const KolmogorovParams& k) -> std::string {
                              IndexLedger ledger = index_ledger(k);
                              if (!ledger.balanced)
                                  return "ledger total " + std::to_string(ledger.total) + " != 2";
                              return {};
                          });
}

SuiteResult suite_darboux(uint64_t seed, int draws, int threads) {
    return run_over_draws("darboux", seed, draws, threads,
                          [](const KolmogorovParams& k) -> std::string {
                              DarbouxCertificate cert = darboux_certificate(k);
                              if (!cert.valid()) return "nonzero residual " +
                                                        cert.residual.to_string("x", "z");
                              // the invariant decays along the flow: sampled chain-rule check
                              PlanarSystem sys = build_system(k);
                              double mu = to_double(k.mu), s = to_double(cert.s);
                              for (double x : {0.3, 1.1}) {
                                  for (double z : {0.4, 0.9}) {
                                      double fx = poly_eval(sys.p, x, z);
                                      double fz = poly_eval(sys.q, x, z);
                                      // d/dt log(x z^mu e^{st}) = fx/x + mu fz/z + s
                                      double v = fx / x + mu * fz / z + s;
                                      if (std::abs(v) > 1e-10)
                                          return "invariant derivative " + std::to_string(v) +
                                                 " at sample point";
                                  }
                              }
                              return {};
                          });
}

SuiteResult suite_symmetry(uint64_t seed, int draws, int threads) {
    DrawGenerator gen(seed);
    std::vector<KolmogorovParams> params;
    std::vector<std::array<double, 2>> starts;
    std::mt19937_64 rng(seed ^ 0x5eedf00dULL);
    std::uniform_real_distribution<double> unif(0.1, 0.5);
    for (int i = 0; i < draws; ++i) {
        params.push_back(gen.next());
        starts.push_back({unif(rng), unif(rng)});
    }
    std::vector<std::string> errors(draws);
    parallel_for(draws, threads, [&](int i) {
        const KolmogorovParams& k = params[i];
        double x0 = starts[i][0], z0 = starts[i][1];
        const double h = 0.005;
        const int steps = 1000;  // t in [0, 5]
        {
            SymmetryOp op{SymmetryKind::FlipX};
            PlaneOrbit a = integrate_plane(k, x0, z0, h, steps, +1);
            PlaneOrbit b = integrate_plane(op.apply(k), -x0, z0, h, steps, +1);
            errors[i] = mirror_mismatch(a, b, -1, 1, "FlipX");
            if (!errors[i].empty()) return;
        }
        {
            SymmetryOp op{SymmetryKind::FlipZ};
            PlaneOrbit a = integrate_plane(k, x0, z0, h, steps, +1);
            PlaneOrbit b = integrate_plane(op.apply(k), x0, -z0, h, steps, +1);
            errors[i] = mirror_mismatch(a, b, 1, -1, "FlipZ");
            if (!errors[i].empty()) return;
        }
        if (sgn(k.a0) != 0 && sgn(k.c0) != 0 && sgn(k.c2) != 0) {
            SymmetryOp op{SymmetryKind::TimeReverse};
            PlaneOrbit back = integrate_plane(k, x0, z0, h, steps, -1);
            PlaneOrbit fwd = integrate_plane(op.apply(k), -x0, -z0, h, steps, +1);
            errors[i] = mirror_mismatch(fwd, back, -1, -1, "TimeReverse");
        }
    });
    SuiteResult result;
    result.name = "symmetry";
    result.checked = draws;
    for (int i = 0; i < draws; ++i)
        if (!errors[i].empty()) result.failures.push_back({params[i], errors[i]});
    return result;
}

SuiteResult suite_contact_points(uint64_t seed, int draws, int threads) {
    DrawGenerator gen(seed);
    std::mt19937_64 rng(seed ^ 0xc0417ac7ULL);
    std::vector<KolmogorovParams> params;
    std::vector<std::vector<double>> lines;
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int i = 0; i < draws; ++i) {
        params.push_back(gen.next());
        std::vector<double> zs;
        while (zs.size() < 20) {
            double z = unif(rng);
            if (std::abs(z) > 0.05) zs.push_back(z);
        }
        lines.push_back(zs);
    }
    std::vector<std::string> errors(draws);
    parallel_for(draws, threads, [&](int i) {
        const KolmogorovParams& k = params[i];
        PlanarSystem sys = build_system(k);
        if (sgn(k.c1) != 0) {
            for (double z0 : lines[i]) {
                double c1 = to_double(k.c1), c2 = to_double(k.c2), c3 = to_double(k.c3),
                       c0 = to_double(k.c0);
                double xstar = -(c2 * z0 * z0 + c3 * z0 + c0) / c1;
                int changes = 0;
                double span = std::max(4.0, 2 * std::abs(xstar));
                double prev = poly_eval(sys.q, xstar - span, z0);
                bool bracketed = false;
                for (int j = 1; j <= 400; ++j) {
                    double x = xstar - span + 2 * span * j / 400.0;
                    double cur = poly_eval(sys.q, x, z0);
                    if (prev * cur < 0) {
                        ++changes;
                        if (std::abs((xstar - span + 2 * span * (j - 0.5) / 400.0) - xstar) <
                            span / 100.0)
                            bracketed = true;
                    }
                    if (cur != 0) prev = cur;
                }
                if (changes != 1) {
                    errors[i] = "dz/dt changes sign " + std::to_string(changes) +
                                " times on z=" + std::to_string(z0);
                    return;
                }
                if (!bracketed) {
                    errors[i] = "the single contact point misses the predicted first coordinate";
                    return;
                }
            }
        } else {
            // c1 = 0: the candidate lines are invariant, everything else is contact-free
            const Rational disc = k.disc();
            if (sgn(disc) > 0) {
                Rational inv = Rational(1) / (2 * k.c2);
                for (int s : {1, -1}) {
                    QuadExt z(-k.c3 * inv, s * inv, disc);
                    QuadExt residual = QuadExt::from_rational(k.c0) +
                                       QuadExt::from_rational(k.c2) * z * z +
                                       QuadExt::from_rational(k.c3) * z;
                    if (!residual.is_zero()) {
                        errors[i] = "invariant line z = (" + std::to_string(s) +
                                    "Rc - c3)/(2c2) fails the exact check";
                        return;
                    }
                }
            } else if (sgn(disc) == 0) {
                Rational z = -k.c3 / (2 * k.c2);
                if (sgn(k.c0 + k.c2 * z * z + k.c3 * z) != 0) {
                    errors[i] = "invariant line z = -c3/(2c2) fails the exact check";
                    return;
                }
            }
            for (double z0 : lines[i]) {
                // dz/dt on z = z0 is constant in x; it must not vanish unless invariant
                double val = to_double(k.c0) + to_double(k.c2) * z0 * z0 + to_double(k.c3) * z0;
                double tol = 1e-9;
                if (std::abs(val) < tol) continue;  // sampled (numerically) on an invariant line
                double q1 = poly_eval(sys.q, -3.0, z0), q2 = poly_eval(sys.q, 3.0, z0);
                if (q1 * q2 <= 0) {
                    errors[i] = "unexpected contact point on a non-invariant line";
                    return;
                }
            }
        }
    });
    SuiteResult result;
    result.name = "contact-points";
    result.checked = draws;
    for (int i = 0; i < draws; ++i)
        if (!errors[i].empty()) result.failures.push_back({params[i], errors[i]});
    return result;
}

SuiteResult suite_blowup_chain(uint64_t seed, int draws, int threads) {
    DrawGenerator gen(seed);
    std::vector<KolmogorovParams> params;
    for (int i = 0; i < draws; ++i) params.push_back(gen.next());
    std::vector<std::string> errors(draws);
    parallel_for(draws, threads, [&](int i) {
        try {
            errors[i] = blowup_chain_mismatch(params[i], i);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    SuiteResult result;
    result.name = "blowup-chain";
    result.checked = draws;
    for (int i = 0; i < draws; ++i)
        if (!errors[i].empty()) result.failures.push_back({params[i], errors[i]});
    return result;
}

SuiteResult suite_partition(uint64_t seed, int draws, int threads) {
    return run_over_draws(
        "partition", seed, draws, threads, [](const KolmogorovParams& k) -> std::string {
            int finite_matches = 0;
            const int major = table1_case(k);
            std::string subcase;
            for (const auto& row : finite_rows()) {
                if (row.major_case != major) continue;
                if (row_matches(k, row.conditions)) {
                    ++finite_matches;
                    subcase = row.subcase;
                }
            }
            if (finite_matches != 1)
                return std::to_string(finite_matches) + " finite rows match in case " +
                       std::to_string(major);
            int table8_matches = 0;
            for (const auto& row : table8_rows()) {
                if (row.subcase != subcase) continue;
                if (row_matches(k, row.branch_conditions)) ++table8_matches;
            }
            if (table8_matches != 1)
                return std::to_string(table8_matches) + " sub-rows of " + subcase + " match";
            return {};
        });
}

SuiteResult suite_divisor_types(uint64_t seed, int draws, int threads) {
    return run_over_draws("divisor-types", seed, draws, threads,
                          [](const KolmogorovParams& k) -> std::string {
                              if (auto err = divisor_types_mismatch(k)) return *err;
                              return {};
                          });
}

std::vector<SuiteResult> run_all_suites(uint64_t seed, int draws, int threads) {
    return {
        suite_oracle_equivalence(seed, draws, threads),
        suite_partition(seed, draws, threads),
        suite_darboux(seed, draws, threads),
        suite_blowup_chain(seed, std::max(20, draws / 10), threads),
        suite_divisor_types(seed, std::max(50, draws / 4), threads),
        suite_symmetry(seed, std::max(20, draws / 10), threads),
        suite_contact_points(seed, std::max(20, draws / 10), threads),
        suite_poincare_hopf(seed, std::max(20, draws / 5), threads),
    };
}

}  // namespace phaseport
