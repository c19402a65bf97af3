// confflow: command-line laboratory for the truncated cubic conformal flow.
// Subcommands: verify, scan, spectrum, continue, evolve, probe.
// Exit codes: 0 success, 1 numerical failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "confflow/core.hpp"
#include "confflow/evolution.hpp"
#include "confflow/families.hpp"
#include "confflow/solver.hpp"
#include "confflow/spectral.hpp"

namespace {

using namespace confflow;
using json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Rows of heterogeneous cells rendered as CSV or JSON with the run
// configuration echoed for provenance.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    json config;

    void add_row(const std::vector<std::string>& cells) { rows.push_back(cells); }

    std::string render_csv() const {
        std::ostringstream os;
        os << "# config:";
        for (auto& [k, v] : config.items()) os << " " << k << "=" << v.dump();
        os << "\n";
        for (size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        for (const auto& r : rows)
            for (size_t i = 0; i < r.size(); ++i)
                os << r[i] << (i + 1 < r.size() ? "," : "\n");
        return os.str();
    }

    std::string render_json() const {
        json out;
        out["config"] = config;
        out["rows"] = json::array();
        for (const auto& r : rows) {
            json obj;
            for (size_t i = 0; i < columns.size() && i < r.size(); ++i) {
                try {
                    size_t pos = 0;
                    double v = std::stod(r[i], &pos);
                    if (pos == r[i].size())
                        obj[columns[i]] = v;
                    else
                        obj[columns[i]] = r[i];
                } catch (...) {
                    obj[columns[i]] = r[i];
                }
            }
            out["rows"].push_back(obj);
        }
        return out.dump(2) + "\n";
    }
};

struct OutputOpts {
    std::string path = "-";
    std::string format = "csv";
};

void emit(const Table& t, const OutputOpts& out) {
    const std::string text = out.format == "json" ? t.render_json() : t.render_csv();
    if (out.path == "-" || out.path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out.path, std::ios::binary);
        if (!f) throw Error("cannot open output file: " + out.path);
        f << text;
    }
}

StationaryState make_family(const std::string& family, double p, double c, int n) {
    if (family == "ground") return ground_state(p, c != 0.0 ? c : 1.0 - p * p, n);
    if (family == "twisted") return twisted_state(p, c != 0.0 ? c : 1.0 - p * p, n);
    if (family == "pair+") return pair_state(p, c != 0.0 ? c : 1.0, PairSign::plus, n);
    if (family == "pair-") return pair_state(p, c != 0.0 ? c : 1.0, PairSign::minus, n);
    if (family == "blaschke") return blaschke_state(p, n);
    if (family == "alternating")
        return alternating_state(p, c != 0.0 ? c : 1.0 - std::pow(p, 4), n);
    if (family == "single0") return single_mode(0, c != 0.0 ? c : 1.0, 0.0, n);
    if (family == "single1") return single_mode(1, c != 0.0 ? c : 1.0, 0.0, n);
    throw DomainError("unknown family: " + family);
}

BranchId parse_branch_id(const std::string& s) {
    if (s == "i") return BranchId::i;
    if (s == "ii") return BranchId::ii;
    if (s == "iii") return BranchId::iii;
    if (s == "unique") return BranchId::unique;
    throw DomainError("unknown branch id: " + s);
}

struct Sweep {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    double at(int i) const {
        return count < 2 ? lo : lo + (hi - lo) * i / (count - 1.0);
    }
};

// --m 0 resolves to the double point carrying the requested branch id.
int resolve_m(const std::string& mode, const std::string& branch, int m) {
    if (m > 0 || branch == "pair+" || branch == "pair-") return m;
    if (branch == "i" || branch == "ii" || branch == "iii")
        return mode == "second" ? 5 : 2;
    throw DomainError("--m is required for branch 'unique'");
}

Sweep parse_sweep(const std::string& s) {
    Sweep sw;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> sw.lo >> c1 >> sw.hi >> c2 >> sw.count) || c1 != ':' || c2 != ':' ||
        sw.count < 1)
        throw DomainError("--param-sweep expects lo:hi:count");
    return sw;
}

int cmd_verify(int n, double tol, double p_ground, const OutputOpts& out) {
    Table t;
    t.columns = {"family", "p", "c", "N", "lambda", "omega",
                 "residual", "Q", "E", "H", "tail_warning", "pass"};
    t.config = {{"command", "verify"}, {"N", n}, {"tol", tol}};
    bool ok = true;
    auto row = [&](const char* name, double p, double c, const StationaryState& s) {
        const double res = residual_norm(s);
        const auto cons = conserved(s.amplitudes());
        const bool pass = res <= tol;
        ok = ok && pass;
        t.add_row({name, fmt17(p), fmt17(c), std::to_string(s.truncation()),
                   fmt17(s.lambda), fmt17(s.omega), fmt17(res), fmt17(cons.Q),
                   fmt17(cons.E), fmt17(cons.H), s.tail_warning ? "1" : "0",
                   pass ? "1" : "0"});
    };
    row("single0", 0, 1.0, single_mode(0, 1.0, 0.0, n));
    row("single1", 0, 1.0, single_mode(1, 1.0, 0.0, n));
    for (double p : {p_ground, 0.3, 0.6})
        row("ground", p, 1.0 - p * p, ground_state(p, 1.0 - p * p, n));
    for (double p : {0.1, 0.3})
        row("twisted", p, 1.0 - p * p, twisted_state(p, 1.0 - p * p, n));
    for (double p : {0.05, 0.15, 0.25}) {
        row("pair+", p, 1.0, pair_state(p, 1.0, PairSign::plus, n));
        row("pair-", p, 1.0, pair_state(p, 1.0, PairSign::minus, n));
    }
    row("blaschke", 0.3, 1.0, blaschke_state(0.3, n));
    row("alternating", 0.3, 1.0 - std::pow(0.3, 4),
        alternating_state(0.3, 1.0 - std::pow(0.3, 4), n));
    emit(t, out);
    return ok ? 0 : 1;
}

int cmd_scan(const std::string& mode, const std::string& range, int n, int grid,
             const OutputOpts& out) {
    double lo = 0.0, hi = 0.0;
    char colon = 0;
    std::istringstream is(range);
    if (!(is >> lo >> colon >> hi) || colon != ':')
        throw DomainError("--range expects lo:hi");
    const BaseMode bm = mode == "second" ? BaseMode::second : BaseMode::lowest;
    auto crossings = linearization_scan(lo, hi, bm, n, grid);
    auto catalog = bm == BaseMode::lowest ? bifurcation_points_lowest(2 * n)
                                          : bifurcation_points_second(2 * n);
    Table t;
    t.columns = {"omega", "multiplicity", "m", "double_point", "N"};
    t.config = {{"command", "scan"}, {"mode", mode}, {"range", range},
                {"grid", grid}, {"N", n}};
    for (const auto& c : crossings) {
        std::string ms;
        bool dbl = false;
        for (const auto& b : catalog)
            if (b.m < n && std::abs(b.omega - c.omega) < 1e-7) {
                if (!ms.empty()) ms += ";";
                ms += std::to_string(b.m);
                dbl = dbl || b.double_point;
            }
        t.add_row({fmt17(c.omega), std::to_string(c.multiplicity), ms,
                   dbl ? "1" : "0", std::to_string(n)});
    }
    emit(t, out);
    return 0;
}

struct BranchRun {
    std::vector<StationaryState> states;  // normalized
    std::vector<double> params;
    BranchFunction fn;
    Normalization norm = Normalization::lambda_one;
};

BranchRun build_branch(const std::string& mode, const std::string& branch, int m,
                       const Sweep& sweep, int n) {
    BranchRun run;
    if (branch == "pair+" || branch == "pair-") {
        const PairSign sign = branch == "pair+" ? PairSign::plus : PairSign::minus;
        run.norm = sign == PairSign::plus ? Normalization::lambda_one
                                          : Normalization::lambda_minus_omega_one;
        run.fn = pair_branch_fn(sign, run.norm, n);
        for (int i = 0; i < sweep.count; ++i) {
            const double p = sweep.at(i);
            StationaryState s = pair_state(p, 1.0, sign, n);
            const double denom = run.norm == Normalization::lambda_one
                                     ? s.lambda
                                     : s.lambda - s.omega;
            run.states.push_back(rescale(s, 1.0 / std::sqrt(denom)));
            run.params.push_back(p);
        }
        return run;
    }
    BranchSpec spec;
    spec.base_mode = mode == "second" ? BaseMode::second : BaseMode::lowest;
    spec.bif_index = m;
    spec.branch_id = parse_branch_id(branch);
    spec.N = n;
    run.norm = spec.base_mode == BaseMode::lowest
                   ? Normalization::lambda_one
                   : Normalization::lambda_minus_omega_one;
    std::vector<double> sched;
    for (int i = 0; i < sweep.count; ++i) sched.push_back(sweep.at(i));
    Branch br = continue_branch(spec, sched);
    for (const auto& s : br.samples) {
        run.states.push_back(s.state);
        run.params.push_back(s.epsilon);
    }
    run.fn = make_branch_fn(br);
    return run;
}

int cmd_spectrum(const std::string& mode, const std::string& branch, int m,
                 const std::string& sweep_str, int n, const OutputOpts& out) {
    m = resolve_m(mode, branch, m);
    const Sweep sweep = parse_sweep(sweep_str);
    BranchRun run = build_branch(mode, branch, m, sweep, n);
    Table t;
    t.columns = {"param", "omega", "eig_plus_min1", "eig_plus_min2",
                 "eig_minus_min1", "n_plus", "n_minus", "n_constrained",
                 "status", "N", "zero_tol_rel"};
    t.config = {{"command", "spectrum"}, {"mode", mode}, {"branch", branch},
                {"m", m}, {"sweep", sweep_str}, {"N", n}, {"zero_tol_rel", 1e-11}};
    for (size_t i = 0; i < run.states.size(); ++i) {
        try {
            SpectralOptions opts;
            opts.normalization = run.norm;
            auto rep = spectral_report(run.states[i], run.fn, opts);
            t.add_row({fmt17(run.params[i]), fmt17(run.states[i].omega),
                       fmt17(rep.eigs_plus[0]), fmt17(rep.eigs_plus[1]),
                       fmt17(rep.eigs_minus[0]), std::to_string(rep.n_plus),
                       std::to_string(rep.n_minus), std::to_string(rep.n_constrained),
                       "ok", std::to_string(n), fmt17(1e-11)});
        } catch (const Error& e) {
            t.add_row({fmt17(run.params[i]), fmt17(run.states[i].omega), "", "", "",
                       "", "", "", std::string("failed: ") + e.what(),
                       std::to_string(n), fmt17(1e-11)});
        }
    }
    emit(t, out);
    return 0;
}

int cmd_continue(const std::string& mode, const std::string& branch, int m,
                 double eps, double mu, int steps, int n, const OutputOpts& out) {
    const bool second = mode == "second";
    if (!(second && (m == 1 || m == 3))) m = resolve_m(mode, branch, m);
    std::vector<double> sched;
    for (int i = 1; i <= steps; ++i) sched.push_back(eps * i / steps);

    // the second-mode double point omega_1 = omega_3 = 0 carries the
    // two-parameter family at lambda = 1, omega = 0, pinned by (eps, mu)
    if (second && (m == 1 || m == 3)) {
        Table t;
        t.columns = {"epsilon", "mu", "Omega", "omega", "lambda",
                     "residual", "Q", "E", "N", "newton_tol"};
        t.config = {{"command", "continue"}, {"mode", mode}, {"branch", "two-param"},
                    {"m", m}, {"eps", eps}, {"mu", mu}, {"steps", steps},
                    {"N", n}, {"newton_tol", 1e-12}};
        for (double e : sched) {
            NewtonInfo info;
            auto st = two_param_family_second(e, mu, n, &info);
            const auto cons = conserved(st.amplitudes());
            t.add_row({fmt17(e), fmt17(mu), fmt17(st.omega), fmt17(st.omega),
                       fmt17(st.lambda), fmt17(info.residual_norm), fmt17(cons.Q),
                       fmt17(cons.E), std::to_string(n), fmt17(1e-12)});
        }
        emit(t, out);
        return 0;
    }

    BranchSpec spec;
    spec.base_mode = second ? BaseMode::second : BaseMode::lowest;
    spec.bif_index = m;
    spec.branch_id = parse_branch_id(branch);
    spec.N = n;
    Branch br = continue_branch(spec, sched);
    Table t;
    t.columns = {"epsilon", "mu", "Omega", "omega", "lambda",
                 "residual", "Q", "E", "N", "newton_tol"};
    t.config = {{"command", "continue"}, {"mode", mode}, {"branch", branch},
                {"m", m}, {"eps", eps}, {"steps", steps},
                {"N", n}, {"newton_tol", 1e-12}};
    for (const auto& s : br.samples) {
        const auto cons = conserved(s.state.amplitudes());
        t.add_row({fmt17(s.epsilon), fmt17(s.mu), fmt17(s.Omega),
                   fmt17(s.state.omega), fmt17(s.state.lambda),
                   fmt17(s.residual_norm), fmt17(cons.Q), fmt17(cons.E),
                   std::to_string(n), fmt17(1e-12)});
    }
    emit(t, out);
    return 0;
}

int cmd_evolve(const std::string& family, double p, double c, double T, double dt,
               int n, int stride, std::uint64_t seed, bool random,
               const OutputOpts& out) {
    AmplitudeState a0(n);
    if (random) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double env = 1.0;
        for (auto& v : a0.alpha) {
            v = env * cplx(gauss(rng), gauss(rng));
            env *= 0.3;
        }
        const double q = conserved(a0).Q;
        for (auto& v : a0.alpha) v /= std::sqrt(q);
    } else {
        a0 = make_family(family, p, c, n).amplitudes();
    }
    Trajectory traj = integrate(a0, T, dt, {stride, 1e6});
    Table t;
    t.columns = {"t", "H", "Q", "E", "Z_re", "Z_im", "N", "dt"};
    t.config = {{"command", "evolve"}, {"family", random ? "random" : family},
                {"p", p}, {"T", T}, {"dt", dt}, {"N", n},
                {"stride", stride}, {"seed", seed}};
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const auto& cq = traj.conserved[i];
        t.add_row({fmt17(traj.times[i]), fmt17(cq.H), fmt17(cq.Q), fmt17(cq.E),
                   fmt17(cq.Z.real()), fmt17(cq.Z.imag()), std::to_string(n),
                   fmt17(dt)});
    }
    emit(t, out);
    return 0;
}

int cmd_probe(const std::string& family, double p, double c, double noise, double T,
              double dt, int n, std::uint64_t seed, const OutputOpts& out) {
    StationaryState ref = make_family(family, p, c, n);
    auto rep = stability_probe(ref, noise, T, seed, {dt, 10});
    Table t;
    t.columns = {"family", "p", "noise", "T", "max_gauge_distance",
                 "dH", "dQ", "dE", "dZ", "seed", "N", "dt"};
    t.config = {{"command", "probe"}, {"family", family}, {"p", p},
                {"noise", noise}, {"T", T}, {"dt", dt},
                {"N", n}, {"seed", seed}};
    t.add_row({family, fmt17(p), fmt17(noise), fmt17(T),
               fmt17(rep.max_gauge_distance), fmt17(rep.drift.H),
               fmt17(rep.drift.Q), fmt17(rep.drift.E), fmt17(rep.drift.absZ),
               std::to_string(seed), std::to_string(n), fmt17(dt)});
    emit(t, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the truncated cubic conformal flow"};
    app.require_subcommand(1);

    OutputOpts out;
    int n = kDefaultTruncation;
    std::string mode = "lowest", branch = "unique", family = "ground";
    double p = 0.1, c = 0.0, eps = 0.02, mu = 0.0, T = 10.0, dt = 1e-3, noise = 1e-3;
    double tol = 1e-9;
    int m = 0, steps = 10, grid = 512, stride = 100;
    std::uint64_t seed = 0;
    std::string range = "0:0.2", sweep = "0.01:0.26:21";
    bool random = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--N", n, "truncation");
        cmd->add_option("--out", out.path, "output path ('-' for stdout)");
        cmd->add_option("--format", out.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* verify = app.add_subcommand("verify", "family residual table");
    add_common(verify);
    verify->add_option("--tol", tol, "residual tolerance");
    verify->add_option("--p", p, "ground-state p for the first row");

    auto* scan = app.add_subcommand("scan", "bifurcation scan of L(omega)");
    add_common(scan);
    scan->add_option("--mode", mode)->check(CLI::IsMember({"lowest", "second"}));
    scan->add_option("--range", range, "omega range lo:hi");
    scan->add_option("--grid", grid, "scan grid cells");

    auto* spectrum =
        app.add_subcommand("spectrum", "smallest eigenvalues along a branch");
    add_common(spectrum);
    spectrum->add_option("--mode", mode)->check(CLI::IsMember({"lowest", "second"}));
    spectrum->add_option("--branch", branch, "i, ii, iii, unique, pair+ or pair-");
    spectrum->add_option("--m", m, "bifurcation index for catalog branches");
    spectrum->add_option("--param-sweep", sweep, "lo:hi:count");

    auto* cont = app.add_subcommand("continue", "predictor-corrector continuation");
    add_common(cont);
    cont->add_option("--mode", mode)->check(CLI::IsMember({"lowest", "second"}));
    cont->add_option("--branch", branch);
    cont->add_option("--m", m, "bifurcation index (0 = resolve from branch id)");
    cont->add_option("--eps", eps, "target pin value");
    cont->add_option("--mu", mu, "secondary pin of the two-parameter family");
    cont->add_option("--steps", steps, "schedule length");

    // long evolutions default to the smaller truncation
    int n_evolve = 32;
    auto* evolve = app.add_subcommand("evolve", "time integration audit");
    evolve->add_option("--N", n_evolve, "truncation");
    evolve->add_option("--out", out.path, "output path ('-' for stdout)");
    evolve->add_option("--format", out.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    evolve->add_option("--family", family);
    evolve->add_option("--p", p);
    evolve->add_option("--c", c);
    evolve->add_option("--T", T);
    evolve->add_option("--dt", dt);
    evolve->add_option("--stride", stride);
    evolve->add_option("--seed", seed);
    evolve->add_flag("--random", random, "random Q=1 initial data");

    int n_probe = 32;
    auto* probe = app.add_subcommand("probe", "empirical orbital-stability probe");
    probe->add_option("--N", n_probe, "truncation");
    probe->add_option("--out", out.path, "output path ('-' for stdout)");
    probe->add_option("--format", out.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    probe->add_option("--family", family);
    probe->add_option("--p", p);
    probe->add_option("--c", c);
    probe->add_option("--noise", noise);
    probe->add_option("--T", T);
    probe->add_option("--dt", dt, "integration step");
    probe->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(n, tol, p, out);
        if (scan->parsed()) return cmd_scan(mode, range, n, grid, out);
        if (spectrum->parsed()) return cmd_spectrum(mode, branch, m, sweep, n, out);
        if (cont->parsed())
            return cmd_continue(mode, branch, m, eps, mu, steps, n, out);
        if (evolve->parsed())
            return cmd_evolve(family, p, c, T, dt, n_evolve, stride, seed, random, out);
        if (probe->parsed())
            return cmd_probe(family, p, c, noise, T, dt, n_probe, seed, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
