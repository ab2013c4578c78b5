#pragma once

// The invariant suite: every documented closed form checked against an
// independent route, every structural invariant checked on random samples.
// Runs are deterministic for a given config; each check draws from its own
// seeded stream so the list can be reordered or extended without disturbing
// the others.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "json.hpp"

#include "bellkit/oracle.hpp"

namespace bellkit::oracle {

struct OracleConfig {
    std::uint64_t seed = 0;
    std::size_t sample_count = 1000;
    double grid_step = 0.01;
    // Multiplies every check's own threshold; 1 keeps the documented values.
    double tolerance = 1.0;
};

inline void validate_config(const OracleConfig& c) {
    if (c.sample_count < 1) throw input_error("sample_count must be at least 1");
    if (!(c.tolerance > 0.0)) throw input_error("tolerance must be positive");
    if (!(c.grid_step > 0.0)) throw input_error("grid_step must be positive");
    const long n = std::llround(2.0 / c.grid_step);
    if (n < 1 || std::abs(static_cast<double>(n) * c.grid_step - 2.0) > 1e-9)
        throw input_error("grid_step must divide the interval [-1, 1] into whole cells");
}

struct CheckResult {
    std::string name;
    std::size_t samples = 0;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string error;  // nonempty when the check threw instead of finishing
};

struct SuiteReport {
    std::uint64_t seed = 0;
    std::size_t sample_count = 0;
    double grid_step = 0.0;
    double tolerance = 1.0;
    std::vector<CheckResult> checks;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.pass; });
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Alternates unconstrained draws with draws forced into each cell so every
// region shows up even at small sample counts.
inline BDState spanning_sample(std::mt19937_64& rng, std::size_t k) {
    if (k % 2 == 0) return sample_bd(rng);
    return sample_entangled_bd(rng, 1 + static_cast<int>((k / 2) % 4));
}

inline double max_abs_entry(const Mat4& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) v = std::max(v, std::abs(m(i, j)));
    return v;
}

// Filter pair satisfying the restriction: even draws use orthogonal axes,
// odd draws a vanishing anisotropy product.
inline LqccParams random_restricted_params(std::mt19937_64& rng, std::size_t k) {
    LqccParams q{random_filter(rng), random_filter(rng), Mat2::identity(), Mat2::identity()};
    if (k % 2 == 0) {
        const Vec3& m = q.filter_a.axis;
        for (;;) {
            const Vec3 v = random_unit_vector(rng);
            const double d = dot3(v, m);
            const Vec3 w{v[0] - d * m[0], v[1] - d * m[1], v[2] - d * m[2]};
            const double n = norm3(w);
            if (n > 1e-6) {
                q.filter_b.axis = {w[0] / n, w[1] / n, w[2] / n};
                break;
            }
        }
    } else {
        q.filter_b.a = 0.0;
    }
    return q;
}

}  // namespace detail

inline SuiteReport run_invariant_suite(const OracleConfig& config) {
    validate_config(config);
    SuiteReport report;
    report.seed = config.seed;
    report.sample_count = config.sample_count;
    report.grid_step = config.grid_step;
    report.tolerance = config.tolerance;

    const std::size_t S = config.sample_count;
    const std::size_t half = std::max<std::size_t>(1, S / 2);
    std::size_t index = 0;

    const auto run = [&](const char* name, std::size_t samples, double tol, auto&& body) {
        CheckResult r;
        r.name = name;
        r.samples = samples;
        r.tolerance = tol * config.tolerance;
        std::mt19937_64 rng(detail::splitmix64(config.seed ^ (0x9E3779B97F4A7C15ull * ++index)));
        try {
            r.max_deviation = body(rng);
            r.pass = r.max_deviation <= r.tolerance;
        } catch (const std::exception& e) {
            r.error = e.what();
            r.max_deviation = 1e300;
            r.pass = false;
        }
        report.checks.push_back(std::move(r));
    };

    run("bd_roundtrip_p_t_p", S, 1e-12, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const Vec4 p = sample_bd(rng).probabilities();
            const Vec4 q = t_to_probs(probs_to_t(p));
            for (std::size_t i = 0; i < 4; ++i) dev = std::max(dev, std::abs(p[i] - q[i]));
        }
        return dev;
    });

    run("bd_ppt_matches_octahedron", S + 50, 0.5, [&](std::mt19937_64& rng) {
        const auto verdicts_agree = [](const BDState& s) {
            const bool sep_region = classify_region(s).is_separable();
            const Mat4 pt = partial_transpose_b(to_density_matrix(s));
            const bool sep_ppt = hermitian_eigen(pt).values[3] >= -1e-10;
            return sep_region == sep_ppt;
        };
        double mismatches = 0.0;
        for (std::size_t k = 0; k < S; ++k)
            if (!verdicts_agree(detail::spanning_sample(rng, k))) mismatches += 1.0;
        // 25 face points straddled from both sides at offset 1e-9 along the
        // inward normal of the owning cell's boundary face.
        static constexpr Vec3 inward[4] = {
            {-1, 1, -1}, {1, -1, -1}, {-1, -1, 1}, {1, 1, 1}};
        int produced = 0;
        while (produced < 25) {
            const int cell = 1 + produced % 4;
            const BDState owner = sample_entangled_bd(rng, cell);
            const BDState face = nearest_separable_bd(owner);
            const Vec4& fp = face.probabilities();
            if (*std::min_element(fp.begin(), fp.end()) < 1e-6) continue;  // too near an edge
            const Vec3 tf = face.correlation();
            const Vec3& g = inward[cell - 1];
            const double step = 1e-9 / std::sqrt(3.0);
            for (const double sgn : {1.0, -1.0}) {
                const Vec3 tp{tf[0] + sgn * step * g[0], tf[1] + sgn * step * g[1],
                              tf[2] + sgn * step * g[2]};
                if (!verdicts_agree(BDState::from_t(tp))) mismatches += 1.0;
            }
            ++produced;
        }
        return mismatches;
    });

    run("bd_region_concurrence_sign", S, 0.5, [&](std::mt19937_64& rng) {
        double mismatches = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const BDState s = detail::spanning_sample(rng, k);
            const double c = concurrence_bd(s);
            const bool bad = classify_region(s).is_separable() ? (c > 1e-10) : (c <= 0.0);
            if (bad) mismatches += 1.0;
        }
        return mismatches;
    });

    run("bd_canonicalize_preserves_multiset", S, 0.5, [&](std::mt19937_64& rng) {
        double mismatches = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const BDState s = detail::spanning_sample(rng, k);
            const CanonicalBD canon = canonicalize_to_singlet(s);
            Vec4 a = s.probabilities();
            Vec4 b = canon.state.probabilities();
            const Vec4 back = canon.permutation.apply(canon.state.probabilities());
            const bool singlet_max = b[3] >= std::max({b[0], b[1], b[2]});
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (!(a == b && back == s.probabilities() && singlet_max)) mismatches += 1.0;
        }
        return mismatches;
    });

    run("measures_concurrence_two_routes", S, 1e-9, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const BDState s = detail::spanning_sample(rng, k);
            dev = std::max(dev, std::abs(concurrence(to_density_matrix(s)) - concurrence_bd(s)));
        }
        return dev;
    });

    run("measures_spin_flip_fixed_point", S, 1e-12, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const Mat4 m = to_density_matrix(detail::spanning_sample(rng, k)).mat();
            dev = std::max(dev, detail::max_abs_entry(spin_flip(m) - m));
        }
        return dev;
    });

    run("measures_entanglement_chain", S, 1e-10, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const BDState s = sample_entangled_bd(rng, 1 + static_cast<int>(k % 4));
            const double c = concurrence_bd(s);
            dev = std::max({dev, std::abs(hs_entanglement(s) - c),
                            std::abs(tilde_entanglement_bd(s) - c)});
        }
        return dev;
    });

    run("measures_nearest_separable_inequalities", S, 1e-10, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const BDState s = sample_entangled_bd(rng, 1 + static_cast<int>(k % 4));
            const Vec3 t = nearest_separable_bd(s).correlation();
            const double x = t[0], y = t[1], z = t[2];
            const double worst = std::min({1 + x - y + z, 1 - x + y + z, 1 + x + y - z,
                                           1 - x - y - z, 1 - x + y - z, 1 + x - y - z,
                                           1 - x - y + z, 1 + x + y + z});
            dev = std::max(dev, std::max(0.0, -worst));
        }
        return dev;
    });

    run("measures_nearest_face_saturation", S, 1e-12, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const BDState s = sample_entangled_bd(rng, 1 + static_cast<int>(k % 4));
            const BDState canon = canonicalize_to_singlet(s).state;
            const Vec3 t = nearest_separable_bd(canon).correlation();
            dev = std::max(dev, std::abs(1.0 + t[0] + t[1] + t[2]));
        }
        return dev;
    });

    run("measures_nearest_in_face_triangle", S, 1e-12, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const BDState s = sample_entangled_bd(rng, 1 + static_cast<int>(k % 4));
            const BDState canon = canonicalize_to_singlet(s).state;
            const Vec3 t = nearest_separable_bd(canon).correlation();
            for (std::size_t i = 0; i < 3; ++i)
                dev = std::max({dev, t[i], -1.0 - t[i]});
        }
        return std::max(dev, 0.0);
    });

    run("measures_eof_monotone", 101, 1e-15, [&](std::mt19937_64&) {
        double dev = 0.0;
        double prev = entanglement_of_formation(0.0);
        for (int k = 1; k <= 100; ++k) {
            const double cur = entanglement_of_formation(static_cast<double>(k) / 100.0);
            dev = std::max(dev, prev - cur);
            prev = cur;
        }
        return std::max(dev, 0.0);
    });

    run("measures_concurrence_canonicalization_invariant", S, 0.5, [&](std::mt19937_64& rng) {
        double mismatches = 0.0;
        for (std::size_t k = 0; k < S; ++k) {
            const BDState s = detail::spanning_sample(rng, k);
            if (concurrence_bd(s) != concurrence_bd(canonicalize_to_singlet(s).state))
                mismatches += 1.0;
        }
        return mismatches;
    });

    run("lqcc_concurrence_transform_law", half, 1e-9, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < half; ++k) {
            const BDState s = detail::spanning_sample(rng, k);
            const LqccParams q{random_filter(rng), random_filter(rng), Mat2::identity(),
                               Mat2::identity()};
            const LqccOutput out = apply_lqcc(to_density_matrix(s), q);
            const double measured = concurrence(out.state);
            const double predicted =
                predict_concurrence_transform(concurrence_bd(s), s.correlation(), q);
            dev = std::max(dev, std::abs(measured - predicted));
        }
        return dev;
    });

    run("lqcc_restricted_norm_equality", half, 1e-12, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < half; ++k) {
            const BDState s = sample_entangled_bd(rng, 1 + static_cast<int>(k % 4));
            const BDState canon = canonicalize_to_singlet(s).state;
            const LqccParams q = detail::random_restricted_params(rng, k);
            const double n1 = normalization_factor(canon.correlation(), q);
            const double n2 =
                normalization_factor(nearest_separable_bd(canon).correlation(), q);
            dev = std::max(dev, std::abs(n1 - n2));
        }
        return dev;
    });

    run("lqcc_unitary_concurrence_invariance", half, 1e-10, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < half; ++k) {
            const BDState s = detail::spanning_sample(rng, k);
            LqccParams q;
            q.filter_a = {uniform(rng, 0.5, 1.5), 0.0, random_unit_vector(rng)};
            q.filter_b = {uniform(rng, 0.5, 1.5), 0.0, random_unit_vector(rng)};
            q.unitary_a = random_unitary(rng);
            q.unitary_b = random_unitary(rng);
            const DensityMatrix rho = to_density_matrix(s);
            const LqccOutput out = apply_lqcc(rho, q);
            dev = std::max(dev, std::abs(concurrence(out.state) - concurrence(rho)));
        }
        return dev;
    });

    run("lqcc_output_state_valid", half, 1e-10, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < half; ++k) {
            const BDState s = detail::spanning_sample(rng, k);
            const LqccParams q{random_filter(rng), random_filter(rng), random_unitary(rng),
                               random_unitary(rng)};
            const Mat4 m = apply_lqcc(to_density_matrix(s), q).state.mat();
            const double tr_defect = std::abs(m.trace() - complexd{1.0, 0.0});
            const double min_eig = hermitian_eigen(m).values[3];
            dev = std::max({dev, tr_defect, hermiticity_defect(m), std::max(0.0, -min_eig)});
        }
        return dev;
    });

    run("lqcc_filter_flip_identity", S, 1e-12, [&](std::mt19937_64& rng) {
        double dev = 0.0;
        for (std::size_t k = 0; k < S; ++k)
            dev = std::max(dev, filter_flip_identity_check(random_filter(rng)));
        return dev;
    });

    run("oracle_grid_matches_closed_form", std::min<std::size_t>(100, S), config.grid_step,
        [&](std::mt19937_64& rng) {
            const std::size_t count = std::min<std::size_t>(100, S);
            double dev = 0.0;
            for (std::size_t k = 0; k < count; ++k) {
                const BDState s = sample_entangled_bd(rng, 1 + static_cast<int>(k % 4));
                const Vec3 t = s.correlation();
                const GridSearchResult g = brute_force_nearest_separable(t, config.grid_step);
                const double closed = hs_distance_bd(t, nearest_separable_bd(s).correlation());
                dev = std::max(dev, std::abs(g.d_best - closed));
            }
            return dev;
        });

    run("oracle_concurrence_alt_routes_agree", S + std::max<std::size_t>(1, S / 5), 1e-8,
        [&](std::mt19937_64& rng) {
            double dev = 0.0;
            for (std::size_t k = 0; k < S; ++k) {
                const DensityMatrix rho = to_density_matrix(detail::spanning_sample(rng, k));
                dev = std::max(dev, std::abs(concurrence_alt_route(rho) - concurrence(rho)));
            }
            for (std::size_t k = 0; k < std::max<std::size_t>(1, S / 5); ++k) {
                const DensityMatrix rho = sample_density(rng);
                dev = std::max(dev, std::abs(concurrence_alt_route(rho) - concurrence(rho)));
            }
            return dev;
        });

    return report;
}

// 12 significant digits: enough to reproduce every documented tolerance,
// short enough to keep reports byte-identical across platforms.
inline double round_significant(double v) {
    if (v == 0.0) return 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline nlohmann::ordered_json to_json(const SuiteReport& r) {
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const CheckResult& c : r.checks) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["samples"] = c.samples;
        jc["max_deviation"] = round_significant(c.max_deviation);
        jc["tolerance"] = round_significant(c.tolerance);
        jc["pass"] = c.pass;
        if (!c.error.empty()) jc["error"] = c.error;
        checks.push_back(std::move(jc));
    }
    nlohmann::ordered_json j;
    j["seed"] = r.seed;
    j["samples"] = r.sample_count;
    j["grid_step"] = round_significant(r.grid_step);
    j["tolerance"] = round_significant(r.tolerance);
    j["checks"] = std::move(checks);
    j["all_pass"] = r.all_pass();
    return j;
}

}  // namespace bellkit::oracle
