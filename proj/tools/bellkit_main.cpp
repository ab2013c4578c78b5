// bellkit: entanglement measures for two-qubit Bell-diagonal states.
//
// Subcommands: measure, nearest, lqcc, geometry, verify.
// Exit codes: 0 success, 2 input error, 3 domain or numerical error,
// 4 verification failure.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bellkit/bellkit.hpp"

namespace {

using bellkit::BDState;
using bellkit::Vec3;
using bellkit::Vec4;
using json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_domain = 3;
constexpr int exit_verification = 4;

// 12 significant digits, negative zero normalized away.
double sig12(double v) {
    if (v == 0.0) return 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

// The emitted t is recomputed from the already-rounded p: rounding both
// independently can leave the printed pair inconsistent by more than 1e-12.
Vec3 t_of(const Vec4& p) {
    return {p[0] - p[1] + p[2] - p[3], -p[0] + p[1] + p[2] - p[3], p[0] + p[1] - p[2] - p[3]};
}

Vec4 rounded(const Vec4& p) { return {sig12(p[0]), sig12(p[1]), sig12(p[2]), sig12(p[3])}; }

json jvec(const Vec3& v) { return json::array({sig12(v[0]), sig12(v[1]), sig12(v[2])}); }
json jvec(const Vec4& v) { return json::array({sig12(v[0]), sig12(v[1]), sig12(v[2]), sig12(v[3])}); }

json input_json(const BDState& s) {
    const Vec4 rp = rounded(s.probabilities());
    json j;
    j["p"] = jvec(rp);
    j["t"] = jvec(t_of(rp));
    return j;
}

json nearest_json(const BDState& s) {
    const Vec4 rp = rounded(s.probabilities());
    json j;
    j["t"] = jvec(t_of(rp));
    j["p"] = jvec(rp);
    return j;
}

struct StateInput {
    std::vector<double> p;
    std::vector<double> t;
};

void add_state_options(CLI::App* cmd, StateInput& in) {
    CLI::Option* po =
        cmd->add_option("--p", in.p, "Bell probabilities p1,p2,p3,p4")->delimiter(',')->expected(4);
    CLI::Option* to =
        cmd->add_option("--t", in.t, "correlation vector t1,t2,t3")->delimiter(',')->expected(3);
    po->excludes(to);
    to->excludes(po);
}

// State construction failures are the caller's input, whichever library
// error class they surface as.
BDState parse_state(const StateInput& in) {
    try {
        if (in.p.size() == 4) return BDState({in.p[0], in.p[1], in.p[2], in.p[3]});
        if (in.t.size() == 3) return BDState::from_t({in.t[0], in.t[1], in.t[2]});
    } catch (const bellkit::domain_error& e) {
        throw bellkit::input_error(e.what());
    }
    throw bellkit::input_error("provide exactly one of --p or --t");
}

Vec3 parse_axis(const std::string& s) {
    if (s == "x") return {1, 0, 0};
    if (s == "y") return {0, 1, 0};
    if (s == "z") return {0, 0, 1};
    Vec3 v{};
    char tail = '\0';
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf%c", &v[0], &v[1], &v[2], &tail) != 3)
        throw bellkit::input_error("axis must be x, y, z or three comma-separated components");
    const double n = bellkit::norm3(v);
    if (n < 1e-12) throw bellkit::input_error("axis vector must be nonzero");
    return {v[0] / n, v[1] / n, v[2] / n};
}

void print_vec(const char* label, const Vec4& v) {
    std::printf("%s: %.12g %.12g %.12g %.12g\n", label, sig12(v[0]), sig12(v[1]), sig12(v[2]),
                sig12(v[3]));
}

void print_vec(const char* label, const Vec3& v) {
    std::printf("%s: %.12g %.12g %.12g\n", label, sig12(v[0]), sig12(v[1]), sig12(v[2]));
}

int run_measure(const StateInput& in, bool as_json, bool log2) {
    const BDState s = parse_state(in);
    const bellkit::MeasureReport r = bellkit::make_measure_report(s);
    const double eof_bits = log2 ? bellkit::entanglement_of_formation_bits(r.concurrence) : 0.0;
    if (as_json) {
        json j;
        j["input"] = input_json(s);
        j["region"] = r.region.name();
        j["concurrence"] = sig12(r.concurrence);
        j["eof_nats"] = sig12(r.eof_nats);
        if (log2) j["eof_bits"] = sig12(eof_bits);
        j["nearest_separable"] = nearest_json(bellkit::nearest_separable_bd(s));
        j["hs_distance"] = sig12(r.hs_distance_to_nearest);
        j["hs_entanglement"] = sig12(r.hs_entanglement);
        j["tilde_entanglement"] = sig12(r.tilde_entanglement);
        std::printf("%s\n", j.dump(2).c_str());
        return exit_ok;
    }
    print_vec("p", r.p);
    print_vec("t", r.t);
    std::printf("region: %s\n", r.region.name().c_str());
    std::printf("concurrence: %.12g\n", sig12(r.concurrence));
    std::printf("entanglement of formation: %.12g nats\n", sig12(r.eof_nats));
    if (log2) std::printf("entanglement of formation: %.12g bits\n", sig12(eof_bits));
    print_vec("nearest separable t", r.nearest_t);
    print_vec("nearest separable p", r.nearest_p);
    std::printf("hs distance: %.12g\n", sig12(r.hs_distance_to_nearest));
    std::printf("hs entanglement: %.12g\n", sig12(r.hs_entanglement));
    std::printf("tilde entanglement: %.12g\n", sig12(r.tilde_entanglement));
    return exit_ok;
}

int run_nearest(const StateInput& in, bool as_json) {
    const BDState s = parse_state(in);
    const BDState nearest = bellkit::nearest_separable_bd(s);
    const double dist = bellkit::hs_distance_bd(s.correlation(), nearest.correlation());
    if (as_json) {
        json j;
        j["input"] = input_json(s);
        j["region"] = bellkit::classify_region(s).name();
        j["nearest_separable"] = nearest_json(nearest);
        j["hs_distance"] = sig12(dist);
        std::printf("%s\n", j.dump(2).c_str());
        return exit_ok;
    }
    print_vec("t", s.correlation());
    std::printf("region: %s\n", bellkit::classify_region(s).name().c_str());
    print_vec("nearest separable t", nearest.correlation());
    print_vec("nearest separable p", nearest.probabilities());
    std::printf("hs distance: %.12g\n", sig12(dist));
    return exit_ok;
}

json filter_json(const bellkit::Filter& f) {
    json j;
    j["mu"] = sig12(f.mu);
    j["a"] = sig12(f.a);
    j["axis"] = jvec(f.axis);
    return j;
}

int run_lqcc(const StateInput& in, const bellkit::LqccParams& q, bool as_json) {
    const BDState s = parse_state(in);
    const bellkit::DensityMatrix rho = bellkit::to_density_matrix(s);
    const bellkit::LqccOutput out = bellkit::apply_lqcc(rho, q);
    const double c_in = bellkit::concurrence_bd(s);
    const double c_measured = bellkit::concurrence(out.state);
    const double c_predicted =
        bellkit::predict_concurrence_transform(c_in, s.correlation(), q);

    // The output of a filtered BD state is BD again exactly when the Bell
    // basis leaves it diagonal.
    const bellkit::Mat4 coeff = bellkit::bell_basis_coefficients(out.state.mat());
    double off = 0.0;
    Vec4 p_out{};
    for (std::size_t i = 0; i < 4; ++i) {
        p_out[i] = coeff(i, i).real();
        off = std::max(off, std::abs(coeff(i, i).imag()));
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) off = std::max(off, std::abs(coeff(i, j)));
    }
    const bool bell_diagonal = off <= 1e-12;

    const double mn = bellkit::dot3(q.filter_a.axis, q.filter_b.axis);
    const double ab = q.filter_a.a * q.filter_b.a;
    const bool restricted = std::abs(mn) <= 1e-12 || std::abs(ab) <= 1e-12;
    bellkit::RestrictedTransform rt{};
    if (restricted) rt = bellkit::restricted_entanglement_transform(s, q);

    if (as_json) {
        json j;
        j["input"] = input_json(s);
        j["filter_a"] = filter_json(q.filter_a);
        j["filter_b"] = filter_json(q.filter_b);
        j["normalization"] = sig12(out.norm);
        json jout;
        jout["bell_diagonal"] = bell_diagonal;
        if (bell_diagonal) {
            const Vec4 rp = rounded(p_out);
            jout["t"] = jvec(t_of(rp));
            jout["p"] = jvec(rp);
        } else {
            json rows = json::array();
            for (std::size_t i = 0; i < 4; ++i) {
                json row = json::array();
                for (std::size_t j2 = 0; j2 < 4; ++j2)
                    row.push_back(json::array({sig12(out.state.mat()(i, j2).real()),
                                               sig12(out.state.mat()(i, j2).imag())}));
                rows.push_back(std::move(row));
            }
            jout["matrix"] = std::move(rows);
        }
        j["output"] = std::move(jout);
        json jc;
        jc["input"] = sig12(c_in);
        jc["measured"] = sig12(c_measured);
        jc["predicted"] = sig12(c_predicted);
        j["concurrence"] = std::move(jc);
        json jr;
        jr["satisfied"] = restricted;
        if (restricted) {
            jr["e_measured"] = sig12(rt.measured);
            jr["e_predicted"] = sig12(rt.predicted);
        }
        j["restricted"] = std::move(jr);
        std::printf("%s\n", j.dump(2).c_str());
        return exit_ok;
    }

    print_vec("input t", s.correlation());
    std::printf("normalization: %.12g\n", sig12(out.norm));
    if (bell_diagonal) {
        const Vec4 rp = rounded(p_out);
        print_vec("output t", t_of(rp));
        print_vec("output p", rp);
    } else {
        std::printf("output is not Bell diagonal; matrix:\n");
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j)
                std::printf("  (%.6g, %.6g)", sig12(out.state.mat()(i, j).real()),
                            sig12(out.state.mat()(i, j).imag()));
            std::printf("\n");
        }
    }
    std::printf("concurrence in: %.12g\n", sig12(c_in));
    std::printf("concurrence measured: %.12g\n", sig12(c_measured));
    std::printf("concurrence predicted: %.12g\n", sig12(c_predicted));
    if (restricted) {
        std::printf("restricted entanglement measured: %.12g\n", sig12(rt.measured));
        std::printf("restricted entanglement predicted: %.12g\n", sig12(rt.predicted));
    } else {
        std::printf("restriction (m.n = 0 or ab = 0) not satisfied\n");
    }
    return exit_ok;
}

double csv_val(double v) { return v == 0.0 ? 0.0 : v; }

void csv_row(double t1, double t2, double t3, const BDState& s) {
    std::printf("%.6g,%.6g,%.6g,%s,%.6g\n", csv_val(t1), csv_val(t2), csv_val(t3),
                bellkit::classify_region(s).name().c_str(),
                csv_val(bellkit::concurrence_bd(s)));
}

int run_geometry(int grid, bool werner, const std::string& plane) {
    if (grid < 2) throw bellkit::input_error("--grid must be at least 2");
    std::printf("t1,t2,t3,region,concurrence\n");

    if (werner) {
        for (int k = 0; k < grid; ++k) {
            const double x = static_cast<double>(k) / (grid - 1);
            const BDState s = BDState::from_t({-x, -x, -x});
            csv_row(-x, -x, -x, s);
        }
        return exit_ok;
    }

    int fixed = -1;
    double value = 0.0;
    if (!plane.empty()) {
        const std::size_t eq = plane.find('=');
        const std::string lhs = plane.substr(0, eq == std::string::npos ? plane.size() : eq);
        if (eq == std::string::npos || (lhs != "t1" && lhs != "t2" && lhs != "t3"))
            throw bellkit::input_error("--plane must look like t1=0.25, t2=-0.5 or t3=0");
        fixed = lhs[1] - '1';
        char tail = '\0';
        if (std::sscanf(plane.c_str() + eq + 1, "%lf%c", &value, &tail) != 1)
            throw bellkit::input_error("--plane value must be a number");
    }

    const auto coord = [&](int k) { return -1.0 + 2.0 * k / (grid - 1); };
    long rows = 0;
    if (fixed >= 0) {
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                Vec3 t{};
                t[static_cast<std::size_t>(fixed)] = value;
                const int free1 = fixed == 0 ? 1 : 0;
                const int free2 = fixed == 2 ? 1 : 2;
                t[static_cast<std::size_t>(free1)] = coord(i);
                t[static_cast<std::size_t>(free2)] = coord(j);
                try {
                    const BDState s = BDState::from_t(t);
                    csv_row(t[0], t[1], t[2], s);
                    ++rows;
                } catch (const bellkit::domain_error&) {
                    // outside the tetrahedron: not part of the slice
                }
            }
        if (rows == 0)
            std::fprintf(stderr, "warning: plane %s does not intersect the state tetrahedron\n",
                         plane.c_str());
        return exit_ok;
    }

    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            for (int k = 0; k < grid; ++k) {
                const Vec3 t{coord(i), coord(j), coord(k)};
                try {
                    const BDState s = BDState::from_t(t);
                    csv_row(t[0], t[1], t[2], s);
                } catch (const bellkit::domain_error&) {
                }
            }
    return exit_ok;
}

int run_verify(std::uint64_t seed, std::size_t samples, double grid_step) {
    bellkit::oracle::OracleConfig cfg;
    cfg.seed = seed;
    cfg.sample_count = samples;
    cfg.grid_step = grid_step;
    const bellkit::oracle::SuiteReport rep = bellkit::oracle::run_invariant_suite(cfg);
    std::printf("%s\n", bellkit::oracle::to_json(rep).dump(2).c_str());
    return rep.all_pass() ? exit_ok : exit_verification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement measures for two-qubit Bell-diagonal states"};
    app.require_subcommand(1);

    StateInput measure_in, nearest_in, lqcc_in;
    bool measure_json = false, nearest_json_flag = false, lqcc_json = false;
    bool measure_log2 = false;

    CLI::App* measure = app.add_subcommand("measure", "all entanglement measures for one state");
    add_state_options(measure, measure_in);
    measure->add_flag("--json", measure_json, "emit JSON");
    measure->add_flag("--log2", measure_log2, "also report entanglement of formation in bits");

    CLI::App* nearest =
        app.add_subcommand("nearest", "nearest separable state and the distance to it");
    add_state_options(nearest, nearest_in);
    nearest->add_flag("--json", nearest_json_flag, "emit JSON");

    CLI::App* lqcc = app.add_subcommand("lqcc", "apply a local filtering operation");
    add_state_options(lqcc, lqcc_in);
    double mu = 1.0, a = 0.0, nu = 1.0, b = 0.0;
    std::string m_axis = "z", n_axis = "z";
    lqcc->add_option("--mu", mu, "side-a filter strength (default 1)");
    lqcc->add_option("--a", a, "side-a filter anisotropy, |a| < 1 (default 0)");
    lqcc->add_option("--m", m_axis, "side-a filter axis: x, y, z or ux,uy,uz (default z)");
    lqcc->add_option("--nu", nu, "side-b filter strength (default 1)");
    lqcc->add_option("--b", b, "side-b filter anisotropy, |b| < 1 (default 0)");
    lqcc->add_option("--n", n_axis, "side-b filter axis: x, y, z or ux,uy,uz (default z)");
    lqcc->add_flag("--json", lqcc_json, "emit JSON");

    CLI::App* geometry =
        app.add_subcommand("geometry", "CSV scan of the state tetrahedron (t, region, concurrence)");
    int grid = 21;
    bool werner = false;
    std::string plane;
    geometry->add_option("--grid", grid, "points per axis (default 21)");
    CLI::Option* werner_opt =
        geometry->add_flag("--werner", werner, "scan the Werner line t = -x(1,1,1), x in [0,1]");
    CLI::Option* plane_opt =
        geometry->add_option("--plane", plane, "restrict to a plane, e.g. t3=0 or t1=0.25");
    werner_opt->excludes(plane_opt);
    plane_opt->excludes(werner_opt);

    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite and report JSON");
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    double grid_step = 0.01;
    verify->add_option("--seed", seed, "RNG seed (default 0)");
    verify->add_option("--samples", samples, "sample count per check (default 1000)");
    verify->add_option("--grid-step", grid_step, "grid spacing for the brute-force search");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (measure->parsed()) return run_measure(measure_in, measure_json, measure_log2);
        if (nearest->parsed()) return run_nearest(nearest_in, nearest_json_flag);
        if (lqcc->parsed()) {
            bellkit::LqccParams q;
            q.filter_a = {mu, a, parse_axis(m_axis)};
            q.filter_b = {nu, b, parse_axis(n_axis)};
            return run_lqcc(lqcc_in, q, lqcc_json);
        }
        if (geometry->parsed()) return run_geometry(grid, werner, plane);
        if (verify->parsed()) return run_verify(seed, samples, grid_step);
    } catch (const bellkit::input_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_input;
    } catch (const bellkit::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_domain;
    } catch (const bellkit::numerical_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_domain;
    }
    return exit_ok;
}
