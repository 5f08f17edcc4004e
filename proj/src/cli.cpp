#include "qcomm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "qcomm/bounds.hpp"
#include "qcomm/verify.hpp"

#ifndef QCOMM_VERSION
#define QCOMM_VERSION "0.0.0"
#endif

namespace qcomm::cli {

using json = nlohmann::ordered_json;

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Records the run and writes itself next to the outputs.
struct Manifest {
    std::string command;
    json config = json::object();
    std::uint64_t seed = 0;
    std::string started = utc_now();
    std::string finished;
    std::vector<std::string> output_paths;

    json to_json() const {
        return json{{"command", command},
                    {"config", config},
                    {"artifact_version", QCOMM_VERSION},
                    {"seed", seed},
                    {"started", started},
                    {"finished", finished},
                    {"output_paths", output_paths}};
    }
};

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << body;
    if (!f) throw std::runtime_error("failed writing output file: " + path);
}

/// Writes `body` to `out_path` (or `out`), then the manifest.
void emit(const std::string& body, const std::string& out_path, const std::string& manifest_path,
          Manifest& manifest, std::ostream& out) {
    std::string mpath = manifest_path;
    if (!out_path.empty()) {
        manifest.output_paths.push_back(out_path);
        if (mpath.empty()) mpath = out_path + ".manifest.json";
    }
    if (!mpath.empty()) manifest.output_paths.push_back(mpath);
    manifest.finished = utc_now();

    if (out_path.empty()) {
        out << body;
    } else {
        write_file(out_path, body);
    }
    if (!mpath.empty()) write_file(mpath, manifest.to_json().dump(2) + "\n");
}

json rows_json(const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back(json{{"q", r.q},
                           {"n", r.n},
                           {"class", to_string(r.matrix_class)},
                           {"max_ratio", r.max_ratio},
                           {"conjectured_bound", r.conjectured_bound},
                           {"gap", r.gap},
                           {"converged_restarts", r.converged_restarts}});
    }
    return arr;
}

json matrix_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.n(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(row);
    }
    return rows;
}

void print_matrix(std::ostream& out, const std::string& name, const CMatrix& m) {
    out << name << ":\n";
    for (std::size_t i = 0; i < m.n(); ++i) {
        out << " ";
        for (std::size_t j = 0; j < m.n(); ++j) {
            out << " (" << format_real(m(i, j).real()) << "," << format_real(m(i, j).imag()) << ")";
        }
        out << "\n";
    }
}

MatrixClass require_class(const std::string& s) {
    auto c = parse_matrix_class(s);
    if (!c) throw std::invalid_argument("unknown class '" + s + "' (general|traceless|normal)");
    return *c;
}

// --- options --------------------------------------------------------------

struct OptimizerFlags {
    int restarts = 64;
    int max_alternations = 500;
    double ratio_tol = 1e-11;
    std::uint64_t seed = 0;
    bool no_witness = false;

    void attach(CLI::App* app) {
        app->add_option("--restarts", restarts, "Random restarts per q")->capture_default_str();
        app->add_option("--max-alternations", max_alternations, "Alternation cap per restart")
            ->capture_default_str();
        app->add_option("--ratio-tol", ratio_tol, "Convergence tolerance on the ratio")->capture_default_str();
        app->add_option("--seed", seed, "PRNG seed")->capture_default_str();
        app->add_flag("--no-witness", no_witness, "Do not seed restart 0 with the closed-form witness");
    }

    OptConfig config(int n, double q, MatrixClass cls) const {
        OptConfig c;
        c.n = n;
        c.q = q;
        c.matrix_class = cls;
        c.restarts = restarts;
        c.max_alternations = max_alternations;
        c.ratio_tol = ratio_tol;
        c.seed = seed;
        c.threads = threads_from_env();
        c.validate();
        return c;
    }

    void echo(json& cfg) const {
        cfg["restarts"] = restarts;
        cfg["max_alternations"] = max_alternations;
        cfg["ratio_tol"] = ratio_tol;
        cfg["seed"] = seed;
        cfg["witness_seeded"] = !no_witness;
    }
};

struct SweepFlags {
    int n = 2;
    std::string cls = "general";
    double q_from = -3.0, q_to = 3.0;
    int q_steps = 61;
    std::string out_path, manifest_path, format = "csv";
    OptimizerFlags opt;
};

struct MaximizeFlags {
    int n = 2;
    double q = 1.0;
    std::string cls = "general";
    std::string json_path;
    OptimizerFlags opt;
};

struct VerifyFlags {
    std::string suite = "proofs";
    int trials = 10000;
    int x_trials = 100000;
    std::uint64_t seed = 1;
    int n_max = 4;
    double q_from = -3.0, q_to = 3.0;
    int q_steps = 13;
    int restarts = 64;
};

struct WitnessFlags {
    std::string family;
    int n = 2;
    double q = 2.0;
    std::optional<double> t;
};

struct CurvesFlags {
    int n = 4;
    double q_from = -3.0, q_to = 3.0;
    int q_steps = 61;
    std::string out_path, manifest_path;
};

// --- commands -------------------------------------------------------------

int cmd_sweep(const SweepFlags& f, std::ostream& out) {
    const MatrixClass cls = require_class(f.cls);
    if (f.format != "csv" && f.format != "json") throw std::invalid_argument("--format must be csv or json");
    const auto qs = q_grid(f.q_from, f.q_to, f.q_steps);
    const OptConfig tmpl = f.opt.config(f.n, qs.front(), cls);

    Manifest m;
    m.command = "sweep";
    m.seed = f.opt.seed;
    m.config = json{{"n", f.n}, {"class", f.cls}, {"q_from", f.q_from}, {"q_to", f.q_to},
                    {"q_steps", f.q_steps}, {"format", f.format}};
    f.opt.echo(m.config);

    const auto rows = sweep_q(f.n, qs, cls, tmpl, !f.opt.no_witness);

    std::string body;
    if (f.format == "csv") {
        body = sweep_csv(rows);
    } else {
        m.finished = utc_now();
        json doc{{"manifest", m.to_json()}, {"rows", rows_json(rows)}};
        body = doc.dump(2) + "\n";
    }
    emit(body, f.out_path, f.manifest_path, m, out);
    return kOk;
}

int cmd_maximize(const MaximizeFlags& f, std::ostream& out) {
    const MatrixClass cls = require_class(f.cls);
    const OptConfig cfg = f.opt.config(f.n, f.q, cls);
    const OptResult r = f.opt.no_witness ? maximize_ratio(cfg) : seed_with_witness(cfg);
    const BoundValue ref = reference_bound(f.n, f.q, cls);

    out << "n: " << f.n << "\nq: " << format_real(f.q) << "\nclass: " << f.cls << "\n";
    out << "best_ratio: " << format_real(r.best_ratio) << "\n";
    out << "reference_bound: " << format_real(ref.coefficient) << " (" << to_string(ref.regime) << ")\n";
    out << "gap: " << format_real(r.best_ratio - ref.coefficient) << "\n";
    out << "restart_index: " << r.restart_index << "\nalternations: " << r.alternations_used
        << "\nconverged: " << (r.converged ? "true" : "false")
        << "\nconverged_restarts: " << r.converged_restarts << "\n";
    print_matrix(out, "A", r.a);
    print_matrix(out, "B", r.b);

    if (!f.json_path.empty()) {
        Manifest m;
        m.command = "maximize";
        m.seed = f.opt.seed;
        m.config = json{{"n", f.n}, {"q", f.q}, {"class", f.cls}};
        f.opt.echo(m.config);
        m.output_paths = {f.json_path, f.json_path + ".manifest.json"};
        m.finished = utc_now();
        json doc{{"manifest", m.to_json()},
                 {"result",
                  {{"best_ratio", r.best_ratio},
                   {"reference_bound", ref.coefficient},
                   {"regime", to_string(ref.regime)},
                   {"restart_index", r.restart_index},
                   {"alternations_used", r.alternations_used},
                   {"converged", r.converged},
                   {"converged_restarts", r.converged_restarts},
                   {"A", matrix_json(r.a)},
                   {"B", matrix_json(r.b)}}}};
        write_file(f.json_path, doc.dump(2) + "\n");
        write_file(f.json_path + ".manifest.json", m.to_json().dump(2) + "\n");
    }
    return kOk;
}

void print_report(std::ostream& out, const CheckReport& r, const char* pass_word, const char* fail_word) {
    out << (r.passed ? pass_word : fail_word) << "  " << r.name << "  trials=" << r.trials
        << "  worst_violation=" << format_real(r.worst_violation) << "  " << r.details << "\n";
}

int cmd_verify(const VerifyFlags& f, std::ostream& out) {
    if (f.suite != "proofs" && f.suite != "conjectures" && f.suite != "all") {
        throw std::invalid_argument("--suite must be proofs, conjectures or all");
    }
    if (f.trials < 1 || f.x_trials < 1) throw std::invalid_argument("--trials must be >= 1");

    bool proofs_ok = true;
    if (f.suite != "conjectures") {
        const auto reports = run_proof_suite({f.trials, f.x_trials, f.seed});
        for (const auto& r : reports) {
            print_report(out, r, "PASS", "FAIL");
            proofs_ok = proofs_ok && r.passed;
        }
    }
    if (f.suite != "proofs") {
        if (f.n_max < 2) throw std::invalid_argument("--n-max must be >= 2");
        OptConfig cfg;
        cfg.restarts = f.restarts;
        cfg.seed = f.seed;
        cfg.threads = threads_from_env();
        const auto qs = q_grid(f.q_from, f.q_to, f.q_steps);
        for (int n = 2; n <= f.n_max; ++n) {
            for (const auto& r : check_conjectures(n, qs, MatrixClass::TracelessA, cfg)) {
                print_report(out, r, "SUPPORTED", "VIOLATED");
            }
        }
    }
    return proofs_ok ? kOk : kFailure;
}

int cmd_witness(const WitnessFlags& f, std::ostream& out) {
    WitnessPair w{CMatrix(1), CMatrix(1), f.q, 0.0, f.family};
    BoundValue bound{0.0, BoundRegime::NormalEitherPositiveQ};
    const auto dim = static_cast<std::size_t>(f.n);
    if (f.n < 2) throw std::invalid_argument("--n must be >= 2");

    if (f.family == "kyfan") {
        if (!(f.q > 0.0)) throw std::invalid_argument("kyfan family requires q > 0");
        for (auto& c : sharpness_witnesses(f.q, f.n))
            if (c.label == "kyfan_normal") w = c;
        bound = {bound_normal_positive(f.q), BoundRegime::NormalEitherPositiveQ};
    } else if (f.family == "projector") {
        const CMatrix p = CMatrix::unit(dim, 0, 0);
        w = {p, p, f.q, (1.0 - f.q) * (1.0 - f.q), "projector"};
        bound = f.q <= 0.0 ? BoundValue{bound_general_nonpositive(f.q), BoundRegime::GeneralNonpositiveQ}
                           : BoundValue{bound_normal_positive(f.q), BoundRegime::NormalEitherPositiveQ};
    } else if (f.family == "ftmax") {
        const double t = f.t ? *f.t : t_max(f.q);
        auto [a, b] = f_family_pair(f.q, t);
        w = {embed(a, dim), embed(b, dim), f.q, f_eval(f.q, t), "ftmax"};
        bound = {bound_normal_positive(f.q), BoundRegime::NormalEitherPositiveQ};
        out << "t: " << format_real(t) << "\n";
    } else if (f.family == "diag") {
        w = diag_counterexample(f.n, f.q);
        bound = traceless_bound_value(f.n, f.q);
    } else {
        throw std::invalid_argument("--family must be kyfan, projector, ftmax or diag");
    }

    const double na = frobenius_norm_sq(w.a);
    const double nb = frobenius_norm_sq(w.b);
    const double nc = frobenius_norm_sq(q_commutator(w.a, w.b, f.q));
    const double r = nc / na / nb;
    const double bound_value = bound.coefficient * na * nb;
    const char* relation = std::abs(r - bound.coefficient) <= 1e-10 * std::max(1.0, bound.coefficient)
                               ? "attains"
                               : (r > bound.coefficient ? "violates" : "below");

    out << "family: " << f.family << "\nn: " << f.n << "\nq: " << format_real(f.q) << "\n";
    print_matrix(out, "A", w.a);
    print_matrix(out, "B", w.b);
    out << "norm_A_sq: " << format_real(na) << "\nnorm_B_sq: " << format_real(nb)
        << "\ncommutator_norm_sq: " << format_real(nc) << "\nratio: " << format_real(r)
        << "\nexpected_ratio: " << format_real(w.expected_ratio)
        << "\nbound_regime: " << to_string(bound.regime)
        << "\nbound_coefficient: " << format_real(bound.coefficient)
        << "\nbound_value: " << format_real(bound_value) << "\nrelation: " << relation << "\n";
    return kOk;
}

int cmd_curves(const CurvesFlags& f, std::ostream& out) {
    if (f.n < 2) throw std::invalid_argument("--n must be >= 2");
    const auto qs = q_grid(f.q_from, f.q_to, f.q_steps);
    const double gn = g(f.n);

    std::string body = "q,one_minus_q_sq,one_plus_q_sq,g_n_one_minus_q_sq,traceless_bound,f_at_tmax\n";
    for (double q : qs) {
        const double minus = (1.0 - q) * (1.0 - q);
        body += format_real(q) + "," + format_real(minus) + "," + format_real(1.0 + q * q) + "," +
                format_real(gn * minus) + "," + format_real(bound_traceless(f.n, q)) + ",";
        if (q > 0.0 && q != 1.0) body += format_real(f_at_tmax(q));
        body += "\n";
    }

    Manifest m;
    m.command = "curves";
    m.config = json{{"n", f.n}, {"q_from", f.q_from}, {"q_to", f.q_to}, {"q_steps", f.q_steps}};
    emit(body, f.out_path, f.manifest_path, m, out);
    return kOk;
}

}  // namespace

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string body = "q,n,class,max_ratio,conjectured_bound,gap,converged_restarts\n";
    for (const auto& r : rows) {
        body += format_real(r.q) + "," + std::to_string(r.n) + "," + to_string(r.matrix_class) + "," +
                format_real(r.max_ratio) + "," + format_real(r.conjectured_bound) + "," +
                format_real(r.gap) + "," + std::to_string(r.converged_restarts) + "\n";
    }
    return body;
}

int threads_from_env() {
    const char* env = std::getenv("QCOMM_THREADS");
    if (env == nullptr || *env == '\0') {
        return std::max(1u, std::thread::hardware_concurrency());
    }
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) {
        throw std::invalid_argument("QCOMM_THREADS must be a positive integer");
    }
    return static_cast<int>(v);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical laboratory for Frobenius-norm bounds on q-deformed commutators"};
    app.name("qcomm");
    app.require_subcommand(1);

    SweepFlags sweep;
    auto* s = app.add_subcommand("sweep", "Maximize the ratio over a q-grid and emit the maxima as CSV or JSON");
    s->add_option("--n", sweep.n, "Matrix dimension")->required();
    s->add_option("--class", sweep.cls, "general|traceless|normal")->capture_default_str();
    s->add_option("--q-from", sweep.q_from)->capture_default_str();
    s->add_option("--q-to", sweep.q_to)->capture_default_str();
    s->add_option("--q-steps", sweep.q_steps, "Grid points, endpoints inclusive")->capture_default_str();
    s->add_option("--out", sweep.out_path, "Output file (stdout if omitted)");
    s->add_option("--manifest", sweep.manifest_path, "Manifest path (default: OUT.manifest.json)");
    s->add_option("--format", sweep.format, "csv|json")->capture_default_str();
    sweep.opt.attach(s);

    MaximizeFlags maxi;
    auto* mx = app.add_subcommand("maximize", "Single (n, q, class) maximization");
    mx->add_option("--n", maxi.n)->required();
    mx->add_option("--q", maxi.q)->required();
    mx->add_option("--class", maxi.cls)->capture_default_str();
    mx->add_option("--json", maxi.json_path, "Also write the result as JSON");
    maxi.opt.attach(mx);

    VerifyFlags ver;
    auto* v = app.add_subcommand("verify", "Run the proof and conjecture checks");
    v->add_option("--suite", ver.suite, "proofs|conjectures|all")->capture_default_str();
    v->add_option("--trials", ver.trials)->capture_default_str();
    v->add_option("--x-trials", ver.x_trials, "Trials for the X >= 0 check")->capture_default_str();
    v->add_option("--seed", ver.seed)->capture_default_str();
    v->add_option("--n-max", ver.n_max, "Largest n in the conjecture suite")->capture_default_str();
    v->add_option("--q-from", ver.q_from)->capture_default_str();
    v->add_option("--q-to", ver.q_to)->capture_default_str();
    v->add_option("--q-steps", ver.q_steps)->capture_default_str();
    v->add_option("--restarts", ver.restarts)->capture_default_str();

    WitnessFlags wit;
    auto* w = app.add_subcommand("witness", "Evaluate a witness or counterexample family member");
    w->add_option("--family", wit.family, "kyfan|projector|ftmax|diag")->required();
    w->add_option("--n", wit.n)->capture_default_str();
    w->add_option("--q", wit.q)->capture_default_str();
    w->add_option("--t", wit.t, "f-family parameter (default t_max(q))");

    CurvesFlags cur;
    auto* c = app.add_subcommand("curves", "Emit the analytic reference curves as CSV");
    c->add_option("--n", cur.n)->capture_default_str();
    c->add_option("--q-from", cur.q_from)->capture_default_str();
    c->add_option("--q-to", cur.q_to)->capture_default_str();
    c->add_option("--q-steps", cur.q_steps)->capture_default_str();
    c->add_option("--out", cur.out_path);
    c->add_option("--manifest", cur.manifest_path);

    std::vector<std::string> argv_store{"qcomm"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (s->parsed()) return cmd_sweep(sweep, out);
        if (mx->parsed()) return cmd_maximize(maxi, out);
        if (v->parsed()) return cmd_verify(ver, out);
        if (w->parsed()) return cmd_witness(wit, out);
        if (c->parsed()) return cmd_curves(cur, out);
    } catch (const OptimizerError& e) {
        err << "qcomm: optimizer failure (restart " << e.restart_index() << "): " << e.what() << "\n";
        return kNumerical;
    } catch (const NumericalError& e) {
        err << "qcomm: numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        err << "qcomm: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "qcomm: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}

}  // namespace qcomm::cli
