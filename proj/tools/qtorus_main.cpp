#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qtorus/io.hpp"

using namespace qtorus;
namespace fs = std::filesystem;

namespace {

// flag-value problems found after CLI11 parsing; mapped to exit code 2
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    if (s.empty()) throw UsageError("empty number");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw UsageError("bad number '" + s + "'");
    if (!std::isfinite(v)) throw UsageError("non-finite number '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    const double v = parse_double(s);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError("bad integer '" + s + "'");
    return static_cast<int>(v);
}

// "1.5", "pi", "2pi", "2*pi", "pi/4", "3pi/4", "-pi/2"
double parse_pi_expr(const std::string& s) {
    const std::size_t at = s.find("pi");
    if (at == std::string::npos) return parse_double(s);
    std::string pre = s.substr(0, at);
    const std::string post = s.substr(at + 2);
    double coef = 1.0;
    if (!pre.empty()) {
        if (pre.back() == '*') pre.pop_back();
        if (pre == "-")
            coef = -1.0;
        else if (!pre.empty())
            coef = parse_double(pre);
    }
    double div = 1.0;
    if (!post.empty()) {
        if (post.front() != '/') throw UsageError("bad time token '" + s + "'");
        div = parse_double(post.substr(1));
        if (div == 0.0) throw UsageError("zero divisor in '" + s + "'");
    }
    return coef * M_PI / div;
}

cplx parse_cplx(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw UsageError("expected re,im pair, got '" + s + "'");
    return {parse_double(parts[0]), parse_double(parts[1])};
}

// either "t1,t2,..." or "a..b" expanded into steps+1 uniform points
std::vector<double> parse_times(const std::string& spec, int steps) {
    std::vector<double> out;
    const std::size_t dots = spec.find("..");
    if (dots != std::string::npos) {
        const double a = parse_pi_expr(spec.substr(0, dots));
        const double b = parse_pi_expr(spec.substr(dots + 2));
        if (steps < 1) throw UsageError("--time-steps must be >= 1");
        for (int i = 0; i <= steps; ++i) out.push_back(a + (b - a) * i / steps);
    } else {
        for (const auto& tok : split(spec, ',')) out.push_back(parse_pi_expr(tok));
    }
    if (out.empty()) throw UsageError("empty time list");
    return out;
}

std::string fmt_cplx_echo(cplx z) { return fmt_g17(z.real()) + "," + fmt_g17(z.imag()); }

void write_json(const fs::path& path, const ojson& o) {
    atomic_write(path.string(), o.dump(2) + "\n");
}

// ---- state selection modes shared by mus / evolve / revival ----

struct StateFlags {
    std::string mu, lambda, target_u, target_v, gaussian;
    int root = 0;
    int basis = 0;
    bool random = false;
    std::uint64_t seed = 0;
};

void add_state_flags(CLI::App* cmd, StateFlags& f) {
    cmd->add_option("--mu", f.mu, "MUS family parameter as re,im");
    cmd->add_option("--root", f.root, "sorted root-ring index (with --mu, default 0)");
    cmd->add_option("--lambda", f.lambda,
                    "lambda as re,im, snapped to the nearest exact root (with --mu)");
    cmd->add_option("--target-u", f.target_u, "solve for <U> = re,im (with --target-v)");
    cmd->add_option("--target-v", f.target_v, "solve for <V> = re,im (with --target-u)");
    cmd->add_option("--gaussian", f.gaussian, "wrapped Gaussian: center_j,sigma_q,momentum_k");
    cmd->add_option("--basis", f.basis, "position eigenstate index");
    cmd->add_flag("--random", f.random, "normalized complex-Gaussian state from --seed");
    cmd->add_option("--seed", f.seed, "RNG seed consumed by --random");
}

struct ResolvedState {
    StateVector state;
    ParamEcho echo;  // mode-specific (flag, value) pairs
    std::optional<MusSpec> spec;
    bool solver_failed = false;
    double solver_residual = 0.0;
    bool degenerate_warning = false;
};

ResolvedState resolve_state(const PhaseSpaceParams& p, const CLI::App* cmd, const StateFlags& f,
                            bool default_basis0) {
    const bool has_mu = cmd->count("--mu") > 0;
    const bool has_root = cmd->count("--root") > 0;
    const bool has_lambda = cmd->count("--lambda") > 0;
    const bool has_tu = cmd->count("--target-u") > 0;
    const bool has_tv = cmd->count("--target-v") > 0;
    const bool has_gauss = cmd->count("--gaussian") > 0;
    const bool has_basis = cmd->count("--basis") > 0;
    const int modes = static_cast<int>(has_mu) + static_cast<int>(has_tu || has_tv) +
                      static_cast<int>(has_gauss) + static_cast<int>(has_basis) +
                      static_cast<int>(f.random);
    if (modes > 1) throw UsageError("state modes are mutually exclusive; give exactly one");
    if (has_tu != has_tv) throw UsageError("--target-u and --target-v go together");
    if ((has_root || has_lambda) && !has_mu) throw UsageError("--root/--lambda require --mu");
    if (has_root && has_lambda) throw UsageError("--root and --lambda are mutually exclusive");

    ResolvedState out;
    if (modes == 0) {
        if (!default_basis0)
            throw UsageError(
                "pick one state mode: --mu / --target-u --target-v / --gaussian / --basis / "
                "--random");
        out.state = basis_state(p, 0);
        out.echo = {{"mode", "basis"}, {"basis", "0"}};
        return out;
    }
    if (has_mu) {
        const cplx mu = parse_cplx(f.mu);
        const MusSpec spec = has_lambda ? mus_spec_near_lambda(p, mu, parse_cplx(f.lambda))
                                        : make_mus_spec(p, mu, f.root);
        out.spec = spec;
        out.degenerate_warning = std::abs(spec.lambda) == 0.0;
        out.state = mus_state(spec);
        out.echo = {{"mode", "mus"},
                    {"mu", fmt_cplx_echo(spec.mu)},
                    {"root", std::to_string(spec.root_index)},
                    {"lambda", fmt_cplx_echo(spec.lambda)}};
        return out;
    }
    if (has_tu) {
        const cplx tu = parse_cplx(f.target_u);
        const cplx tv = parse_cplx(f.target_v);
        out.echo = {{"mode", "solve"},
                    {"target-u", fmt_cplx_echo(tu)},
                    {"target-v", fmt_cplx_echo(tv)}};
        try {
            const SolveResult r = solve_mus_for_targets(p, tu, tv);
            out.spec = r.spec;
            out.solver_residual = r.residual;
        } catch (const NoConvergence& ex) {
            out.spec = ex.best;
            out.solver_residual = ex.residual;
            out.solver_failed = true;
        }
        out.state = mus_state(*out.spec);
        out.degenerate_warning = std::abs(out.spec->lambda) == 0.0;
        return out;
    }
    if (has_gauss) {
        const auto parts = split(f.gaussian, ',');
        if (parts.size() != 3)
            throw UsageError("--gaussian wants center_j,sigma_q,momentum_k");
        const double center = parse_double(parts[0]);
        const double sigma = parse_double(parts[1]);
        const double momentum = parse_double(parts[2]);
        out.state = gaussian_state(p, center, sigma, momentum);
        out.echo = {{"mode", "gaussian"}, {"gaussian", f.gaussian}};
        return out;
    }
    if (has_basis) {
        out.state = basis_state(p, f.basis);
        out.echo = {{"mode", "basis"}, {"basis", std::to_string(f.basis)}};
        return out;
    }
    // random
    std::mt19937_64 gen(f.seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<cplx> c(p.n);
    for (auto& z : c) z = cplx(dist(gen), dist(gen));
    out.state = make_state(p, std::move(c));
    out.echo = {{"mode", "random"}, {"seed", std::to_string(f.seed)}};
    return out;
}

int peak_site(const StateVector& s) {
    int best = 0;
    for (int j = 1; j < s.params.n; ++j)
        if (std::norm(s.c[j]) > std::norm(s.c[best])) best = j;
    return best;
}

std::vector<double> site_probs(const StateVector& s) {
    std::vector<double> p(s.c.size());
    for (std::size_t j = 0; j < s.c.size(); ++j) p[j] = std::norm(s.c[j]);
    return p;
}

std::vector<double> momentum_probs(const StateVector& s) {
    std::vector<double> p(s.d.size());
    for (std::size_t k = 0; k < s.d.size(); ++k) p[k] = std::norm(s.d[k]);
    return p;
}

// ---- subcommands ----

int cmd_algebra_check(int n, const std::string& out_dir) {
    const auto rep = check_identities(make_params(n));
    const ParamEcho echo{
        {"subcommand", "algebra-check"}, {"n", std::to_string(n)}, {"out", out_dir}};
    fs::create_directories(out_dir);
    write_json(fs::path(out_dir) / "identities.json", identity_report_json(rep, echo));
    double worst = 0.0;
    int failed = 0;
    for (const auto& c : rep.identities) {
        // *_flips entries carry informational counts, not residuals
        if (c.name.size() < 6 || c.name.compare(c.name.size() - 6, 6, "_flips") != 0)
            worst = std::max(worst, c.residual);
        if (!c.pass) ++failed;
    }
    std::printf("algebra-check n=%d: %zu identities, worst residual %.3e, %s\n", n,
                rep.identities.size(), worst, failed == 0 ? "all pass" : "FAILURES");
    if (failed != 0) {
        std::fprintf(stderr, "error: %d identities failed\n", failed);
        return 1;
    }
    return 0;
}

int cmd_mus(const CLI::App* cmd, int n, const StateFlags& f, const std::string& out_dir,
            bool svg) {
    const auto p = make_params(n);
    const ResolvedState rs = resolve_state(p, cmd, f, false);

    ParamEcho echo{{"subcommand", "mus"}, {"n", std::to_string(n)}};
    echo.insert(echo.end(), rs.echo.begin(), rs.echo.end());
    echo.push_back({"out", out_dir});
    echo.push_back({"svg", svg ? "1" : "0"});

    if (rs.degenerate_warning)
        std::fprintf(stderr,
                     "warning: mu^n = 1 is degenerate, the root ring collapses to lambda = 0 "
                     "(uniform-family state)\n");

    const auto e = expectations(rs.state);
    UncertaintyReport rep;
    bool continuum_ok = true;
    std::string note;
    try {
        rep = gup_excess(rs.state);
    } catch (const NoCircularMean& ex) {
        rep = unitary_uncertainty(rs.state);
        continuum_ok = false;
        note = ex.what();
    }

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_json(dir / "state.json", state_json(rs.state, echo));
    atomic_write((dir / "state.csv").string(), state_sites_csv(rs.state, echo));
    atomic_write((dir / "momentum.csv").string(), state_momentum_csv(rs.state, echo));
    write_json(dir / "expectations.json", expectations_json(e, echo));
    write_json(dir / "uncertainty.json", uncertainty_json(rep, continuum_ok, note, echo));
    if (rs.spec) {
        ojson o = meta_json(echo);
        o["mu"] = ojson::array({rs.spec->mu.real(), rs.spec->mu.imag()});
        o["lambda"] = ojson::array({rs.spec->lambda.real(), rs.spec->lambda.imag()});
        o["root_index"] = rs.spec->root_index;
        o["converged"] = !rs.solver_failed;
        o["residual"] = rs.solver_residual;
        write_json(dir / "solve.json", o);
    }
    if (svg) {
        const std::string nn = std::to_string(n);
        atomic_write((dir / "state.svg").string(),
                     svg_bars("site probabilities, n = " + nn, "site j", "|c_j|^2",
                              site_probs(rs.state), echo));
        atomic_write((dir / "momentum.svg").string(),
                     svg_bars("momentum probabilities, n = " + nn, "mode k", "|d_k|^2",
                              momentum_probs(rs.state), echo));
    }

    std::printf("mus n=%d: peak site %d, |<U>| = %.9f, |<V>| = %.9f, gap = %.3e\n", n,
                peak_site(rs.state), std::abs(e.exp_u), std::abs(e.exp_v), rep.saturation_gap);
    if (rs.spec)
        std::printf("  mu = (%.12g, %.12g), lambda = (%.12g, %.12g), root %d\n",
                    rs.spec->mu.real(), rs.spec->mu.imag(), rs.spec->lambda.real(),
                    rs.spec->lambda.imag(), rs.spec->root_index);
    if (cmd->count("--target-u") > 0)
        std::printf("  solver residual = %.3e (%s)\n", rs.solver_residual,
                    rs.solver_failed ? "NOT converged, best effort written" : "converged");
    if (continuum_ok)
        std::printf("  dq2 = %.9f, dp2 = %.9f, product = %.9f, excess = %.3e\n", rep.dq2,
                    rep.dp2, rep.product, rep.excess);
    else
        std::printf("  continuum dispersions undefined: %s\n", note.c_str());

    if (rs.solver_failed) {
        std::fprintf(stderr, "error: solver did not converge (residual %.3e)\n",
                     rs.solver_residual);
        return 1;
    }
    return 0;
}

int cmd_evolve(const CLI::App* cmd, int n, int k, const StateFlags& f,
               const std::string& times_spec, int time_steps, const std::string& out_dir,
               bool svg) {
    const auto p = make_params(n);
    const auto h = build_hamiltonian(p, k);
    const ResolvedState rs = resolve_state(p, cmd, f, true);
    const auto times = parse_times(times_spec, time_steps);

    ParamEcho echo{{"subcommand", "evolve"}, {"n", std::to_string(n)}, {"k", std::to_string(k)}};
    echo.insert(echo.end(), rs.echo.begin(), rs.echo.end());
    echo.push_back({"times", times_spec});
    echo.push_back({"time-steps", std::to_string(time_steps)});
    echo.push_back({"out", out_dir});
    echo.push_back({"svg", svg ? "1" : "0"});

    const EvolutionTrace tr = evolve(h, rs.state, times);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    atomic_write((dir / "trace.csv").string(), trace_csv(tr, echo));
    atomic_write((dir / "frames.csv").string(), trace_frames_csv(tr, echo));
    write_json(dir / "trace.json", trace_json(tr, echo));
    if (svg) {
        std::vector<double> abs_s;
        abs_s.reserve(tr.survival.size());
        for (const auto& a : tr.survival) abs_s.push_back(std::abs(a));
        atomic_write((dir / "survival.svg").string(),
                     svg_curve("survival amplitude, n = " + std::to_string(n) +
                                   ", k = " + std::to_string(k),
                               "t", "|A(t)|", tr.times, abs_s, echo));
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%04zu.svg", i);
            char title[64];
            std::snprintf(title, sizeof title, "t = %.6g", tr.times[i]);
            atomic_write((dir / name).string(),
                         svg_bars(title, "site j", "|c_j|^2", tr.site_probs[i], echo));
        }
    }

    const double final_abs = std::abs(tr.survival.back());
    std::printf("evolve n=%d k=%d: %zu times in [%.6g, %.6g], final |A| = %.9f\n", n, k,
                times.size(), times.front(), times.back(), final_abs);
    return 0;
}

int cmd_revival(const CLI::App* cmd, int n, int k, const StateFlags& f,
                const std::string& tmax_str, int steps, double tol,
                const std::string& out_dir) {
    const auto p = make_params(n);
    const auto h = build_hamiltonian(p, k);
    const ResolvedState rs = resolve_state(p, cmd, f, true);
    const double t_max = parse_pi_expr(tmax_str);

    ParamEcho echo{{"subcommand", "revival"},
                   {"n", std::to_string(n)},
                   {"k", std::to_string(k)}};
    echo.insert(echo.end(), rs.echo.begin(), rs.echo.end());
    echo.push_back({"t-max", tmax_str});
    echo.push_back({"steps", std::to_string(steps)});
    echo.push_back({"tol", fmt_g17(tol)});
    echo.push_back({"out", out_dir});

    RevivalReport grid = survival_grid_period(h, rs.state, t_max, steps, tol);
    const RevivalReport spectral = spectral_period(h);
    double half_fidelity = 0.0;
    if (grid.period) {
        const auto [offset, fidelity] = translated_revival(h, rs.state, *grid.period / 2.0);
        grid.translated_offset = offset;
        half_fidelity = fidelity;
    }

    bool consistent = false;
    std::string note;
    if (spectral.kind == RevivalKind::exact && grid.kind == RevivalKind::exact) {
        const double big_t = *spectral.period;
        const double small_t = *grid.period;
        const long long m = std::llround(big_t / small_t);
        consistent = m >= 1 && std::abs(big_t - static_cast<double>(m) * small_t) <=
                                   1e-8 * std::max(1.0, big_t);
        note = consistent ? "grid period divides the spectral period"
                          : "grid and spectral periods disagree";
    } else if (spectral.kind == RevivalKind::none) {
        consistent = true;
        if (grid.kind == RevivalKind::exact)
            note = "spectrum aperiodic within the search cap; exact per-state revival found";
        else if (grid.kind == RevivalKind::approximate)
            note = "spectrum aperiodic within the search cap; approximate per-state dip "
                   "reported";
        else
            note = "spectrum aperiodic within the search cap; no per-state dip below tol";
    } else {
        const double big_t = *spectral.period;
        if (big_t > t_max * (1.0 + 1e-12)) {
            consistent = true;
            note = "spectral period lies beyond the grid horizon t_max";
        } else {
            consistent = false;
            note = "spectral period inside the horizon but no matching grid revival";
        }
    }

    fs::create_directories(out_dir);
    ojson o = revival_json(grid, spectral, consistent, note, echo);
    if (grid.period) o["grid"]["half_period_fidelity"] = half_fidelity;
    write_json(fs::path(out_dir) / "revival.json", o);

    const auto kind_name = [](RevivalKind kk) {
        return kk == RevivalKind::exact ? "exact"
               : kk == RevivalKind::approximate ? "approximate"
                                                : "none";
    };
    std::printf("revival n=%d k=%d\n", n, k);
    if (grid.period)
        std::printf("  grid:     kind=%s period=%.12g residual=%.3e offset@T/2=%d "
                    "fidelity=%.6f\n",
                    kind_name(grid.kind), *grid.period, grid.residual,
                    *grid.translated_offset, half_fidelity);
    else
        std::printf("  grid:     kind=%s best residual=%.3e\n", kind_name(grid.kind),
                    grid.residual);
    if (spectral.period)
        std::printf("  spectral: kind=%s period=%.12g residual=%.3e\n",
                    kind_name(spectral.kind), *spectral.period, spectral.residual);
    else
        std::printf("  spectral: kind=none residual=%.3e\n", spectral.residual);
    std::printf("  consistent: %s (%s)\n", consistent ? "yes" : "NO", note.c_str());
    return consistent ? 0 : 1;
}

int cmd_gup(const std::string& n_list, const std::string& probe_name,
            const std::string& out_dir, bool svg) {
    std::vector<int> ns;
    for (const auto& tok : split(n_list, ',')) ns.push_back(parse_int(tok));
    if (ns.size() < 4) {
        std::fprintf(stderr, "error: --n-list needs at least 4 values\n");
        return 2;
    }
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] < 2 || (i > 0 && ns[i] <= ns[i - 1])) {
            std::fprintf(stderr, "error: --n-list must be strictly increasing, all >= 2\n");
            return 2;
        }
    }
    const Probe probe = probe_name == "mus"      ? Probe::mus
                        : probe_name == "dp2x2" ? Probe::dp2x2
                                                 : Probe::gaussian;

    ParamEcho echo{{"subcommand", "gup"},
                   {"n-list", n_list},
                   {"probe", probe_name},
                   {"out", out_dir},
                   {"svg", svg ? "1" : "0"}};

    std::vector<UncertaintyReport> rows;
    std::vector<double> excesses;
    for (int n : ns) {
        rows.push_back(gup_excess(probe_state(make_params(n), probe)));
        excesses.push_back(rows.back().excess);
    }

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    atomic_write((dir / "gup.csv").string(), uncertainty_csv(rows, echo));

    ScalingFit fit;
    try {
        fit = fit_scaling(ns, excesses);
    } catch (const InsufficientPositiveExcess& ex) {
        write_json(dir / "gup.json", scaling_json(rows, nullptr, ex.what(), echo));
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    write_json(dir / "gup.json", scaling_json(rows, &fit, "", echo));
    if (svg)
        atomic_write((dir / "scaling.svg").string(),
                     svg_loglog("excess scaling, probe " + probe_name, fit.n_values,
                                fit.excesses, fit.exponent, fit.amplitude, echo));

    std::printf("gup probe=%s: exponent %.5f, amplitude %.5f, r^2 %.6f\n", probe_name.c_str(),
                fit.exponent, fit.amplitude, fit.r_squared);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum mechanics on a discrete phase-space torus"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* ac = app.add_subcommand("algebra-check", "verify the clock/shift operator identities");
    int ac_n = 0;
    std::string ac_out = ".";
    ac->add_option("--n", ac_n, "dimension (1..64)")->required()->check(CLI::Range(1, 64));
    ac->add_option("--out", ac_out, "output directory");

    auto* ms = app.add_subcommand("mus", "build a state and report its uncertainty profile");
    int ms_n = 0;
    std::string ms_out = ".";
    bool ms_svg = false;
    StateFlags ms_f;
    ms->add_option("--n", ms_n, "dimension")->required()->check(CLI::PositiveNumber);
    add_state_flags(ms, ms_f);
    ms->add_option("--out", ms_out, "output directory");
    ms->add_flag("--svg", ms_svg, "emit bar-chart SVGs");

    auto* ev = app.add_subcommand("evolve", "time-evolve a state under H = 2 - T - T^dag");
    int ev_n = 0, ev_k = 0, ev_steps = 64;
    std::string ev_times, ev_out = ".";
    bool ev_svg = false;
    StateFlags ev_f;
    ev->add_option("--n", ev_n, "dimension")->required()->check(CLI::PositiveNumber);
    ev->add_option("--k", ev_k, "hop index (1..n-1)")->required();
    ev->add_option("--times", ev_times, "comma list of pi-expressions, or a..b range")
        ->required();
    ev->add_option("--time-steps", ev_steps, "intervals for the a..b form (default 64)");
    add_state_flags(ev, ev_f);
    ev->add_option("--out", ev_out, "output directory");
    ev->add_flag("--svg", ev_svg, "emit survival curve and per-time frames");

    auto* rv = app.add_subcommand("revival", "detect wave-packet revivals two ways");
    int rv_n = 0, rv_k = 0, rv_steps = 4096;
    std::string rv_tmax = "8pi", rv_out = ".";
    double rv_tol = 1e-4;
    StateFlags rv_f;
    rv->add_option("--n", rv_n, "dimension")->required()->check(CLI::PositiveNumber);
    rv->add_option("--k", rv_k, "hop index (1..n-1)")->required();
    rv->add_option("--t-max", rv_tmax, "grid search horizon (pi-expression, default 8pi)");
    rv->add_option("--steps", rv_steps, "grid points (default 4096)");
    rv->add_option("--tol", rv_tol, "dip threshold on 1-|A| (default 1e-4)");
    add_state_flags(rv, rv_f);
    rv->add_option("--out", rv_out, "output directory");

    auto* gp = app.add_subcommand("gup", "sweep the uncertainty-product excess over n");
    std::string gp_list, gp_probe = "mus", gp_out = ".";
    bool gp_svg = false;
    gp->add_option("--n-list", gp_list, "comma list of dimensions, at least 4, increasing")
        ->required();
    gp->add_option("--probe", gp_probe, "probe family (default mus)")
        ->check(CLI::IsMember({"mus", "dp2x2", "gaussian"}));
    gp->add_option("--out", gp_out, "output directory");
    gp->add_flag("--svg", gp_svg, "emit log-log scaling SVG");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (ac->parsed()) return cmd_algebra_check(ac_n, ac_out);
        if (ms->parsed()) return cmd_mus(ms, ms_n, ms_f, ms_out, ms_svg);
        if (ev->parsed())
            return cmd_evolve(ev, ev_n, ev_k, ev_f, ev_times, ev_steps, ev_out, ev_svg);
        if (rv->parsed())
            return cmd_revival(rv, rv_n, rv_k, rv_f, rv_tmax, rv_steps, rv_tol, rv_out);
        if (gp->parsed()) return cmd_gup(gp_list, gp_probe, gp_out, gp_svg);
    } catch (const UsageError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const std::domain_error& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    } catch (const std::invalid_argument& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const std::out_of_range& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
