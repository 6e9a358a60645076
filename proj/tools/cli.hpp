#pragma once

// sl2osc command line: catalog, verify, simulate, bracket-table.
//
// Exit codes: 0 pass, 1 usage or domain error, 2 numeric failure (including a
// failed verdict), 3 expression parse error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sl2/sl2.hpp"

namespace sl2::cli {

enum Exit : int { kPass = 0, kUsage = 1, kNumeric = 2, kParse = 3 };

/// Thrown for bad flag values that CLI11 cannot catch on its own.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SpecArgs {
    std::string kind = "euclidean-osc";
    std::size_t n = 2;
    double omega = 0.0;
    double kappa = 0.0;
    double a = 1.0;
    std::vector<std::string> deltas;
};

inline std::vector<double> to_reals(const std::vector<std::string>& tokens) {
    std::vector<double> out;
    for (const auto& t : tokens) {
        const auto v = trim(t);
        if (v.empty() || v == "[]") continue;
        try {
            for (double d : parse_real_list(v)) out.push_back(d);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

inline catalog::SystemSpec make_spec(const SpecArgs& args) {
    const auto kind = catalog::parse_kind(args.kind);
    if (!kind) throw UsageError("unknown kind '" + args.kind + "' (see `sl2osc catalog`)");
    catalog::SystemSpec s{*kind, args.n, args.omega, args.kappa, args.a, to_reals(args.deltas)};
    s.validate();
    return s;
}

inline void add_spec_options(CLI::App* sub, SpecArgs& args) {
    sub->add_option("--kind", args.kind, "system kind");
    sub->add_option("--n", args.n, "degrees of freedom");
    sub->add_option("--omega", args.omega, "oscillator frequency");
    sub->add_option("--kappa", args.kappa, "curvature parameter");
    sub->add_option("--a", args.a, "Darboux III parameter");
    sub->add_option("--deltas", args.deltas, "anharmonic coefficients delta_1,delta_2,...")->delimiter(',');
}

/// Fill options not given on the command line from a `key = value` file.
/// Keys name long options without the dashes; unknown keys are ignored so one
/// file can serve several subcommands.
inline void apply_config(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        const auto body = trim(line);
        if (body.empty() || body.front() == '#' || body.front() == ';' || body.front() == '[') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw UsageError("config line without '=': " + std::string(body));
        const std::string key(trim(body.substr(0, eq)));
        std::string value(trim(body.substr(eq + 1)));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key == "config") continue;
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || opt->count() > 0) continue;
        if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
        if (value.empty()) continue;
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    }
}

/// Seed precedence: flag, config file, SL2OSC_SEED, 1.
inline std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    if (const char* env = std::getenv("SL2OSC_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError("SL2OSC_SEED must be a non-negative integer");
    }
    return value;
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
    if (!f) throw UsageError("failed writing '" + path + "'");
}

inline void check_writable(const std::string& path) {
    if (path.empty() || path == "-") return;
    std::ofstream f(path, std::ios::app);
    if (!f) throw UsageError("output path '" + path + "' is not writable");
}

/// Parse --expr with the names from --params, reporting errors with their position.
inline expr::Expression parse_expression(const std::string& text, const expr::ParamTable& params) {
    return expr::Expression::parse(text, params);
}

inline expr::ParamTable parse_params_arg(const std::string& text) {
    try {
        return expr::parse_params(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--params: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// catalog

struct CatalogArgs {
    std::string kind;
    std::vector<std::string> deltas;
    double omega = 1.0;
};

inline int cmd_catalog(const CatalogArgs& args, std::ostream& out) {
    std::vector<catalog::Kind> kinds;
    if (args.kind.empty()) {
        kinds.assign(catalog::kAllKinds.begin(), catalog::kAllKinds.end());
    } else {
        const auto k = catalog::parse_kind(args.kind);
        if (!k) throw UsageError("unknown kind '" + args.kind + "'");
        kinds.push_back(*k);
    }
    const auto deltas = to_reals(args.deltas);
    for (std::size_t idx = 0; idx < kinds.size(); ++idx) {
        const catalog::Kind k = kinds[idx];
        catalog::SystemSpec s;
        s.kind = k;
        if (!catalog::is_free(k)) {
            s.omega = args.omega;
            s.deltas = deltas;
        } else if (!args.kind.empty() && !deltas.empty()) {
            throw UsageError("free kinds take no deltas");
        }
        const auto info = catalog::info(k);
        std::string tag_text;
        for (const auto& t : catalog::tags(s)) tag_text += (tag_text.empty() ? "" : ", ") + t;
        if (idx) out << "\n";
        out << catalog::name(k) << "\n"
            << "  hamiltonian:    " << info.hamiltonian << "\n"
            << "  extra integral: " << info.extra_integral << "  (unperturbed only)\n"
            << "  parameters:     " << info.parameters << "\n"
            << "  constraints:    " << info.constraints << "\n"
            << "  status:         " << tag_text << "\n";
        if (!s.deltas.empty()) out << "  deltas:         " << join_reals(s.deltas, ", ") << "\n";
    }
    return kPass;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
    SpecArgs spec;
    std::uint64_t seed = 1;
    std::size_t samples = 200;
    std::size_t rank_samples = 20;
    double tol = 1e-10;
    double svd_cutoff = 1e-8;
    bool ms = false;
    std::string expr;
    std::string params;
    std::string extra;
    std::string out;
    unsigned workers = verify::default_workers();
};

inline int cmd_verify(VerifyArgs args, const CLI::Option* seed_opt, std::ostream& out, std::ostream& err) {
    args.seed = resolve_seed(seed_opt, args.seed);
    if (args.samples < 1) throw UsageError("--samples must be >= 1");
    if (args.rank_samples < 1) throw UsageError("--rank-samples must be >= 1");
    if (!(args.tol > 0.0)) throw UsageError("--tol must be > 0");
    if (!(args.svd_cutoff > 0.0 && args.svd_cutoff < 1.0)) throw UsageError("--svd-cutoff must be in (0, 1)");
    if (args.workers < 1) throw UsageError("--workers must be >= 1");
    check_writable(args.out);

    verify::VerifyOptions opt;
    opt.seed = args.seed;
    opt.samples = args.samples;
    opt.rank_samples = std::min(args.rank_samples, args.samples);
    opt.tol.bracket_rel = args.tol;
    opt.tol.svd_cutoff = args.svd_cutoff;
    opt.request_ms = args.ms;
    opt.workers = args.workers;

    verify::VerificationReport rep;
    if (!args.expr.empty()) {
        const auto params = parse_params_arg(args.params);
        const auto e = parse_expression(args.expr, params);
        if (args.spec.n < 1 || args.spec.n > catalog::kMaxDim)
            throw UsageError("--n must be in 1.." + std::to_string(catalog::kMaxDim));
        std::optional<catalog::Family> family;
        if (!args.extra.empty()) {
            family = catalog::parse_family(args.extra);
            if (!family) throw UsageError("--extra must be one of euclidean, poincare, beltrami, darboux");
        } else if (args.ms) {
            throw UsageError("--ms with --expr needs --extra <family> to name the extra integrals");
        }
        rep = verify::verify_expression(e, params, args.spec.n, family, opt);
    } else {
        if (!args.extra.empty()) throw UsageError("--extra applies to --expr only");
        rep = verify::verify_system(make_spec(args.spec), opt);
    }

    write_text(args.out, verify::to_json(rep).dump(2) + "\n", out);
    if (!args.out.empty() && args.out != "-")
        out << "verdict_qms: " << verify::verdict_name(rep.verdict_qms)
            << "\nverdict_ms: " << verify::verdict_name(rep.verdict_ms) << "\n";
    for (const auto& note : rep.notes) err << "note: " << note << "\n";

    const verify::Verdict claimed = args.ms ? rep.verdict_ms : rep.verdict_qms;
    return claimed == verify::Verdict::fail ? kNumeric : kPass;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    SpecArgs spec;
    std::vector<std::string> q;
    std::vector<std::string> p;
    double h = 1e-3;
    double t_end = 10.0;
    std::size_t stride = 1;
    std::vector<std::string> watch;
    std::string expr;
    std::string params;
    std::string extra;
    std::string out;
};

/// Watch tokens: H (always reported), universal, extra, C<m>, Cr<m>, I<i>,
/// L<i>_<j>, Jm, Jp, J3, q<i>, p<i>.
inline std::vector<Observable> resolve_watch(const std::vector<std::string>& tokens, std::size_t n,
                                             const std::function<Observable(std::size_t)>& extra) {
    std::vector<Observable> out;
    auto index = [&](std::string_view digits, const std::string& tok) {
        std::size_t v = 0;
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (digits.empty() || res.ec != std::errc() || res.ptr != digits.data() + digits.size())
            throw UsageError("bad watch token '" + tok + "'");
        return v;
    };
    for (const auto& raw : tokens) {
        const std::string tok(trim(raw));
        if (tok.empty() || tok == "H") continue;
        if (tok == "universal") {
            for (auto& f : catalog::universal_integrals(n)) out.push_back(std::move(f));
        } else if (tok == "extra") {
            if (!extra) throw UsageError("no extra integrals for this system (use --extra with --expr)");
            for (std::size_t i = 1; i <= n; ++i) out.push_back(extra(i));
        } else if (tok == "Jm") {
            out.push_back(observables::jminus());
        } else if (tok == "Jp") {
            out.push_back(observables::jplus());
        } else if (tok == "J3") {
            out.push_back(observables::j3());
        } else if (tok.rfind("Cr", 0) == 0) {
            const auto m = index(std::string_view(tok).substr(2), tok);
            if (m < 2 || m > n) throw UsageError("watch " + tok + ": index out of range 2.." + std::to_string(n));
            out.push_back(observables::casimir(m, Chain::right));
        } else if (tok.front() == 'C') {
            const auto m = index(std::string_view(tok).substr(1), tok);
            if (m < 2 || m > n) throw UsageError("watch " + tok + ": index out of range 2.." + std::to_string(n));
            out.push_back(observables::casimir(m, Chain::left));
        } else if (tok.front() == 'I') {
            if (!extra) throw UsageError("no extra integrals for this system (use --extra with --expr)");
            const auto i = index(std::string_view(tok).substr(1), tok);
            if (i < 1 || i > n) throw UsageError("watch " + tok + ": index out of range 1.." + std::to_string(n));
            out.push_back(extra(i));
        } else if (tok.front() == 'L') {
            const auto us = tok.find('_');
            if (us == std::string::npos) throw UsageError("bad watch token '" + tok + "' (expected L<i>_<j>)");
            const auto i = index(std::string_view(tok).substr(1, us - 1), tok);
            const auto j = index(std::string_view(tok).substr(us + 1), tok);
            if (!(1 <= i && i < j && j <= n)) throw UsageError("watch " + tok + ": need 1 <= i < j <= n");
            out.push_back(observables::angular(i, j));
        } else if (tok.front() == 'q' || tok.front() == 'p') {
            const auto i = index(std::string_view(tok).substr(1), tok);
            if (i < 1 || i > n) throw UsageError("watch " + tok + ": index out of range");
            out.push_back(observables::coordinate(tok.front() == 'q' ? i - 1 : n + i - 1, n));
        } else {
            throw UsageError("unknown watch token '" + tok + "'");
        }
    }
    return out;
}

inline int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    if (!(args.h > 0.0 && std::isfinite(args.h))) throw UsageError("--dt must be > 0");
    if (!(args.t_end >= 0.0 && std::isfinite(args.t_end))) throw UsageError("--t-end must be >= 0");
    if (args.stride < 1) throw UsageError("--stride must be >= 1");
    const auto q = to_reals(args.q);
    const auto p = to_reals(args.p);
    if (q.empty() || q.size() != p.size()) throw UsageError("--q and --p must be nonempty lists of equal length");
    if (q.size() > catalog::kMaxDim) throw UsageError("at most " + std::to_string(catalog::kMaxDim) + " degrees of freedom");
    check_writable(args.out);
    const PhaseState s0(q, p);
    const std::size_t n = q.size();

    std::optional<Observable> hamiltonian;
    std::function<Observable(std::size_t)> extra;
    if (!args.expr.empty()) {
        const auto params = parse_params_arg(args.params);
        const auto e = parse_expression(args.expr, params);
        hamiltonian = expr::make_observable(e, params);
        if (!args.extra.empty()) {
            const auto family = catalog::parse_family(args.extra);
            if (!family) throw UsageError("--extra must be one of euclidean, poincare, beltrami, darboux");
            auto get = [&](const char* k) {
                const auto it = params.find(k);
                return it == params.end() ? 0.0 : it->second;
            };
            const double omega = get("omega"), kappa = get("kappa");
            const catalog::Family fam = *family;
            extra = [=](std::size_t i) {
                return Observable::generic("I" + std::to_string(i), [=](auto qs, auto ps) {
                    using T = std::remove_cv_t<typename decltype(qs)::value_type>;
                    const T hv = fam == catalog::Family::darboux ? expr::evaluate<T>(e, qs, ps, params)
                                                                 : constant_like(0.0, qs[0]);
                    return catalog::extra_integral_formula<T>(fam, i, qs, ps, omega, kappa, hv);
                });
            };
        }
        try {
            (void)hamiltonian->value(s0);
        } catch (const DomainError& ex) {
            throw DomainError(std::string("initial state outside the domain: ") + ex.what());
        }
    } else {
        SpecArgs sa = args.spec;
        sa.n = n;
        const auto spec = make_spec(sa);
        if (!catalog::in_domain(spec, s0))
            throw DomainError("initial state outside the domain: " + catalog::domain_violation(spec, dot<double>(s0.q(), s0.q())));
        hamiltonian = catalog::hamiltonian_observable(spec);
        // for perturbed systems these are the stale unperturbed formulas, useful as a non-conservation witness
        extra = [spec](std::size_t i) { return catalog::candidate_integral_observable(spec, i); };
    }

    std::vector<std::string> watch_tokens = args.watch;
    if (watch_tokens.empty()) watch_tokens.push_back("universal");
    const auto watch = resolve_watch(watch_tokens, n, extra);

    integrate::IntegrateOptions opt;
    opt.h = args.h;
    opt.t_end = args.t_end;
    opt.stride = args.stride;
    const auto traj = integrate::integrate(*hamiltonian, s0, watch, opt);

    std::ostringstream csv;
    integrate::write_csv(csv, traj);
    const bool csv_to_stdout = args.out == "-";
    if (!args.out.empty()) write_text(args.out, csv.str(), out);

    std::ostream& summary = csv_to_stdout ? err : out;
    summary << std::setprecision(6);
    summary << "status: " << integrate::status_name(traj.status) << "\n";
    summary << "steps stored: " << traj.times.size() << "\n";
    summary << "max drift H: " << traj.max_energy_drift << "\n";
    for (std::size_t w = 0; w < traj.watch_names.size(); ++w)
        summary << "max drift " << traj.watch_names[w] << ": " << traj.max_drift[w] << "\n";
    if (!traj.ok()) {
        err << "error: " << traj.message << " at t = " << format_shortest(traj.failure_time) << "\n";
        return kNumeric;
    }
    return kPass;
}

// ---------------------------------------------------------------------------
// bracket-table

struct BracketTableArgs {
    std::size_t n = 3;
    std::string set = "sl2";
    std::uint64_t seed = 1;
    std::string format = "text";
};

/// Poisson brackets of a set of observables at one seeded random state.
inline int cmd_bracket_table(BracketTableArgs args, const CLI::Option* seed_opt, std::ostream& out) {
    args.seed = resolve_seed(seed_opt, args.seed);
    if (args.n < 1 || args.n > catalog::kMaxDim)
        throw UsageError("--n must be in 1.." + std::to_string(catalog::kMaxDim));
    std::vector<Observable> set;
    if (args.set == "sl2") {
        set = {observables::jminus(), observables::jplus(), observables::j3()};
    } else if (args.set == "so") {
        for (std::size_t i = 1; i <= args.n; ++i)
            for (std::size_t j = i + 1; j <= args.n; ++j) set.push_back(observables::angular(i, j));
    } else if (args.set == "left" || args.set == "right") {
        set = catalog::chain_integrals(args.n, args.set == "left" ? Chain::left : Chain::right);
    } else if (args.set == "universal") {
        set = catalog::universal_integrals(args.n);
    } else {
        throw UsageError("--set must be one of sl2, so, left, right, universal");
    }
    if (set.empty()) throw UsageError("the chosen set is empty for n = " + std::to_string(args.n));
    if (args.format != "text" && args.format != "json") throw UsageError("--format must be text or json");

    verify::Sampler sampler;
    sampler.n = args.n;
    sampler.seed = args.seed;
    const PhaseState s = sampler.draw(1).front();
    std::vector<Jet> jets;
    for (const auto& f : set) jets.push_back(f.jet(s));

    if (args.format == "json") {
        nlohmann::ordered_json j;
        j["n"] = args.n;
        j["seed"] = args.seed;
        j["q"] = std::vector<double>(s.q().begin(), s.q().end());
        j["p"] = std::vector<double>(s.p().begin(), s.p().end());
        std::vector<std::string> names;
        for (const auto& f : set) names.push_back(f.name());
        j["names"] = names;
        j["values"] = nlohmann::ordered_json::array();
        for (const auto& f : jets) j["values"].push_back(f.value());
        auto rows = nlohmann::ordered_json::array();
        for (const auto& a : jets) {
            auto row = nlohmann::ordered_json::array();
            for (const auto& b : jets) row.push_back(bracket_of(a, b).value);
            rows.push_back(row);
        }
        j["brackets"] = rows;
        out << j.dump(2) << "\n";
        return kPass;
    }

    out << "state q = [" << join_reals(std::vector<double>(s.q().begin(), s.q().end()), ", ") << "]\n"
        << "      p = [" << join_reals(std::vector<double>(s.p().begin(), s.p().end()), ", ") << "]\n";
    out << std::setw(8) << "{.,.}";
    for (const auto& f : set) out << std::setw(14) << f.name();
    out << "\n";
    out << std::scientific << std::setprecision(5);
    for (std::size_t i = 0; i < set.size(); ++i) {
        out << std::setw(8) << set[i].name();
        for (std::size_t j = 0; j < set.size(); ++j) out << std::setw(14) << bracket_of(jets[i], jets[j]).value;
        out << "\n";
    }
    out << std::defaultfloat;
    return kPass;
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Superintegrable sl(2)-coalgebra oscillators: catalog, verification and simulation"};
    app.name("sl2osc");
    app.require_subcommand(1);

    CatalogArgs cat;
    auto* c = app.add_subcommand("catalog", "list the built-in systems");
    c->add_option("--kind", cat.kind, "show one kind only");
    c->add_option("--omega", cat.omega, "frequency used for the status tags")->capture_default_str();
    c->add_option("--deltas", cat.deltas, "anharmonic coefficients")->delimiter(',');

    VerifyArgs ver;
    std::string ver_config;
    auto* v = app.add_subcommand("verify", "check QMS / MS numerically and write a JSON report");
    add_spec_options(v, ver.spec);
    auto* ver_seed = v->add_option("--seed", ver.seed, "sampler seed (default: $SL2OSC_SEED or 1)");
    v->add_option("--samples", ver.samples, "number of sampled states")->capture_default_str();
    v->add_option("--rank-samples", ver.rank_samples, "states used for the rank test")->capture_default_str();
    v->add_option("--tol", ver.tol, "relative bracket tolerance")->capture_default_str();
    v->add_option("--svd-cutoff", ver.svd_cutoff, "relative singular value cutoff")->capture_default_str();
    v->add_flag("--ms", ver.ms, "claim maximal superintegrability (exit status follows the MS verdict)");
    v->add_option("--expr", ver.expr, "Hamiltonian in Jm, Jp, J3 and named parameters");
    v->add_option("--params", ver.params, "parameter bindings name=value,...");
    v->add_option("--extra", ver.extra, "extra-integral family for --expr: euclidean|poincare|beltrami|darboux");
    v->add_option("--out", ver.out, "report path (default: standard output)");
    v->add_option("--workers", ver.workers, "worker threads")->capture_default_str();
    v->add_option("--config", ver_config, "key = value file; command-line flags take precedence");

    SimulateArgs sim;
    std::string sim_config;
    auto* s = app.add_subcommand("simulate", "integrate with the implicit midpoint rule and report drifts");
    add_spec_options(s, sim.spec);
    s->add_option("--q", sim.q, "initial positions q1,...,qN")->delimiter(',');
    s->add_option("--p", sim.p, "initial momenta p1,...,pN")->delimiter(',');
    s->add_option("--dt", sim.h, "step size")->capture_default_str();
    s->add_option("--t-end", sim.t_end, "final time")->capture_default_str();
    s->add_option("--stride", sim.stride, "store every k-th step")->capture_default_str();
    s->add_option("--watch", sim.watch, "integrals to watch: universal, extra, C2, Cr2, I1, L1_2, ...")
        ->delimiter(',');
    s->add_option("--expr", sim.expr, "Hamiltonian in Jm, Jp, J3 and named parameters");
    s->add_option("--params", sim.params, "parameter bindings name=value,...");
    s->add_option("--extra", sim.extra, "extra-integral family for --expr");
    s->add_option("--out", sim.out, "CSV path ('-' for standard output)");
    s->add_option("--config", sim_config, "key = value file; command-line flags take precedence");

    BracketTableArgs bt;
    auto* b = app.add_subcommand("bracket-table", "Poisson brackets of a set of observables at a random state");
    b->add_option("--n", bt.n, "degrees of freedom")->capture_default_str();
    b->add_option("--set", bt.set, "sl2 | so | left | right | universal")->capture_default_str();
    auto* bt_seed = b->add_option("--seed", bt.seed, "state seed (default: $SL2OSC_SEED or 1)");
    b->add_option("--format", bt.format, "text | json")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (c->parsed()) return cmd_catalog(cat, out);
        if (v->parsed()) {
            if (!ver_config.empty()) apply_config(v, ver_config);
            return cmd_verify(ver, ver_seed, out, err);
        }
        if (s->parsed()) {
            if (!sim_config.empty()) apply_config(s, sim_config);
            return cmd_simulate(sim, out, err);
        }
        if (b->parsed()) return cmd_bracket_table(bt, bt_seed, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ContractViolation& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return kUsage;
    } catch (const Unsupported& e) {
        err << "unsupported: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        // outside verify, a domain error means the caller's input left the domain
        err << "domain error: " << e.what() << "\n";
        return v->parsed() ? kNumeric : kUsage;
    } catch (const SamplingFailure& e) {
        err << "sampling failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const BindingError& e) {
        err << "binding error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kUsage;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("sl2osc");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sl2::cli
