// delegate: command-line front end for the solver library.

#include "delegate/delegate.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

using namespace delegate;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitGuard = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised after a report has been written, to select exit code 2.
class ViolationExit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string instance, menu, output = "-", format = "json", family, graph = "edgeless";
    std::size_t k = 1, n = 2, m = 2, l = 2;
    std::string delta, eps = "0";
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double guard = kDefaultOracleGuard;
    bool direct = false;
    bool eps_from_menu = true;
};

std::string read_text(const std::string& path) {
    std::stringstream buf;
    if (path.empty() || path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot open " + path);
        buf << in.rdbuf();
    }
    return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

Rational rational_arg(const std::string& text, const std::string& flag) {
    try {
        return parse_rational(text);
    } catch (const RationalParseError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

Rational nonneg_arg(const std::string& text, const std::string& flag) {
    Rational r = rational_arg(text, flag);
    if (r < 0) throw UsageError(flag + " must be nonnegative");
    return r;
}

std::string approx(const Rational& r) { return format_rational(r) + " (~" + format_approx(r) + ")"; }

// Instance and menu documents. Solver outputs embed the instance so they can be piped onward.
struct Inputs {
    DelegationInstance inst;
    json menu;
};

DelegationInstance load_instance_arg(const Options& o) {
    auto doc = detail::parse_document(read_text(o.instance));
    if (doc.contains("instance") && !doc.contains("types")) return instance_from_json(doc["instance"]);
    return instance_from_json(doc);
}

Inputs load_with_menu(const Options& o) {
    Inputs in;
    const std::string menu_path = o.menu.empty() ? "-" : o.menu;
    if (o.instance == "-" && menu_path == "-") throw UsageError("instance and menu cannot both come from stdin");
    in.menu = detail::parse_document(read_text(menu_path));
    if (!o.instance.empty()) {
        in.inst = load_instance_arg(o);
    } else if (in.menu.contains("instance")) {
        in.inst = instance_from_json(in.menu["instance"]);
    } else {
        throw UsageError("menu does not embed an instance; pass -i");
    }
    return in;
}

void check_instance(const DelegationInstance& inst) {
    auto rep = validate_instance(inst);
    if (!rep.ok()) {
        std::string msg = "invalid instance:";
        for (const auto& s : rep.issues) msg += "\n  " + s;
        throw UsageError(msg);
    }
}

void emit(const Options& o, const json& doc, const std::string& table) {
    write_text(o.output, o.format == "table" ? table : doc.dump(2) + "\n");
}

std::string menu_table(const DelegationInstance& inst, const DeterministicMenu& menu) {
    std::ostringstream out;
    for (std::size_t i = 0; i < menu.schemes.size(); ++i) {
        const auto& s = menu.schemes[i];
        out << "  scheme " << i << ": ";
        if (s.opt_out()) {
            out << "opt-out\n";
            continue;
        }
        out << inst.actions[s.action] << "  expected payment " << approx(inst.expected_payment(s.action, s.payments))
            << "  payments [";
        for (std::size_t w = 0; w < s.payments.size(); ++w) out << (w ? ", " : "") << format_rational(s.payments[w]);
        out << "]\n";
    }
    return out.str();
}

json menu_document(const DelegationInstance& inst, const DeterministicMenu& menu, const Rational& value) {
    json doc = menu_to_json(inst, menu);
    doc["value"] = format_rational(value);
    doc["instance"] = instance_to_json(inst);
    return doc;
}

// Subcommands ---------------------------------------------------------------------------------

int cmd_gen(const Options& o) {
    DelegationInstance inst;
    if (o.family == "single-bad") {
        inst = gen_single_bad(o.n);
    } else if (o.family == "randomized-gap") {
        inst = gen_randomized_gap(o.n);
    } else if (o.family == "random") {
        inst = gen_random(o.n, o.m, o.l, o.seed);
    } else if (o.family == "hardness") {
        GraphSpec g{o.n, {}};
        if (o.graph == "path") {
            for (std::size_t v = 1; v < o.n; ++v) g.edges.push_back({v, v + 1});
        } else if (o.graph == "complete") {
            for (std::size_t u = 1; u <= o.n; ++u)
                for (std::size_t v = u + 1; v <= o.n; ++v) g.edges.push_back({u, v});
        } else if (o.graph != "edgeless") {
            throw UsageError("--graph must be edgeless, path or complete");
        }
        inst = gen_hardness(g).instance;
    } else {
        throw UsageError("unknown family \"" + o.family + "\" (single-bad, randomized-gap, random, hardness)");
    }
    write_text(o.output, save_instance(inst));
    return kExitOk;
}

int cmd_solve_det(const Options& o) {
    auto inst = load_instance_arg(o);
    check_instance(inst);
    if (o.k < 1) throw UsageError("--k must be at least 1");
    SolveOptions opts;
    opts.threads = o.threads;
    auto rep = solve_menu_k(inst, o.k, opts);
    auto menu = pricing_to_menu(inst, rep.solution, o.direct ? MenuKind::kDirect : MenuKind::kIndirect);
    json doc = menu_document(inst, menu, rep.value);
    doc["k"] = o.k;
    json prices = json::array();
    for (const auto& it : rep.solution.items) {
        json e;
        e["action"] = it.opt_out() ? json(nullptr) : json(inst.actions[it.action]);
        e["price"] = format_rational(it.price);
        prices.push_back(std::move(e));
    }
    doc["prices"] = std::move(prices);
    std::ostringstream t;
    t << "optimal menu with k = " << o.k << "\nvalue " << approx(rep.value) << "\n" << menu_table(inst, menu);
    t << "decimals are approximate\n";
    emit(o, doc, t.str());
    return kExitOk;
}

int cmd_solve_rand(const Options& o) {
    auto inst = load_instance_arg(o);
    check_instance(inst);
    auto sol = solve_randomized_lp(inst);
    auto reg = regularize(inst, sol);
    auto menu = recover_menu(inst, reg);
    auto rep = verify_randomized(inst, menu);
    if (!rep.ok() || rep.value != sol.value) throw std::logic_error("recovered randomized menu failed verification");
    json doc = randomized_menu_to_json(inst, menu);
    doc["value"] = format_rational(sol.value);
    doc["instance"] = instance_to_json(inst);
    std::ostringstream t;
    t << "randomized menu\nvalue " << approx(sol.value) << "\n";
    for (std::size_t th = 0; th < inst.num_types(); ++th) {
        t << "  " << inst.types[th] << ":";
        for (std::size_t a = 0; a < inst.num_actions(); ++a)
            if (menu.phi(th, a) != 0)
                t << " " << inst.actions[a] << " w.p. " << format_rational(menu.phi(th, a)) << " paying "
                  << approx(inst.expected_payment(a, menu.payments[th][a])) << ";";
        if (menu.phi(th, inst.num_actions()) != 0) t << " opt-out w.p. " << format_rational(menu.phi(th, inst.num_actions()));
        t << "\n";
    }
    t << "decimals are approximate\n";
    emit(o, doc, t.str());
    return kExitOk;
}

ContinuousActionFamily family_arg(const std::string& name) {
    if (name == "toy") return toy_family();
    if (name == "quadratic") return quadratic_family();
    if (name.empty()) throw UsageError("--family is required (toy, quadratic, or a tabulated JSON file)");
    return family_from_json(detail::parse_document(read_text(name)), name);
}

int cmd_solve_cont(const Options& o) {
    if (o.delta.empty()) throw UsageError("--delta is required");
    const Rational delta = rational_arg(o.delta, "--delta");
    if (delta <= 0 || delta > 1) throw UsageError("--delta must lie in (0, 1]");
    auto family = family_arg(o.family);
    SolveOptions opts;
    opts.threads = o.threads;
    auto res = solve_continuous(family, delta, opts);
    const DelegationInstance& inst = res.program.instance;
    DeterministicMenu menu;
    for (const auto& it : res.robust.solution.items)
        menu.schemes.push_back(it.opt_out() ? PaymentScheme{kOptOut, Vector(inst.num_outcomes())}
                                            : PaymentScheme{it.action, reconstruct_payment(inst, it.action, it.price, it.eps)});
    const Rational measured = measure_provider_slack(family, res);
    json doc = menu_document(inst, menu, res.value);
    doc["family"] = family.name;
    doc["delta"] = format_rational(delta);
    doc["program_value"] = format_rational(res.program_value);
    doc["guarantee"] = format_rational(res.guarantee);
    doc["provider_slack_bound"] = format_rational(res.slack_bound);
    doc["measured_provider_slack"] = format_rational(measured);
    std::ostringstream t;
    t << "continuous family " << family.name << ", delta " << format_rational(delta) << ", " << res.program.grid.size()
      << " grid actions\n"
      << "relaxed program value  " << approx(res.program_value) << "\n"
      << "robustified value      " << approx(res.value) << "\n"
      << "guaranteed at least    " << approx(res.guarantee) << "\n"
      << "provider slack bound   " << approx(res.slack_bound) << "\n"
      << "measured provider gain " << approx(measured) << "\n"
      << menu_table(inst, menu) << "decimals are approximate\n";
    emit(o, doc, t.str());
    return kExitOk;
}

// Pricing form of a menu whose schemes are eps-IC for the provider.
PricingSolution menu_pricing(const DelegationInstance& inst, const DeterministicMenu& menu, const Rational& eps) {
    std::vector<std::size_t> actions;
    Vector prices;
    for (std::size_t i = 0; i < menu.schemes.size(); ++i) {
        const auto& s = menu.schemes[i];
        actions.push_back(s.action);
        if (s.opt_out()) {
            prices.emplace_back(0);
            continue;
        }
        auto dev = provider_deviation(inst, s.action, s.payments);
        if (dev.gain > eps)
            throw ViolationExit("scheme " + std::to_string(i) + " violates provider IC by " + format_rational(dev.gain) +
                                " (deviation " + inst.actions[dev.deviation] + ")");
        prices.push_back(inst.expected_payment(s.action, s.payments));
    }
    return make_solution(make_pricing_model(inst, eps), actions, prices);
}

int cmd_robustify(const Options& o) {
    if (o.delta.empty()) throw UsageError("--delta is required");
    RobustnessParams params{nonneg_arg(o.delta, "--delta"), nonneg_arg(o.eps, "--eps")};
    auto in = load_with_menu(o);
    check_instance(in.inst);
    auto menu = menu_from_json(in.inst, in.menu);
    auto priced = menu_pricing(in.inst, menu, params.eps);
    RobustifiedMenu res;
    try {
        res = robustify(in.inst, priced, params);
    } catch (const PreconditionError& e) {
        throw ViolationExit(e.what());
    }
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    DeterministicMenu out;
    for (const auto& it : res.solution.items)
        out.schemes.push_back(it.opt_out() ? PaymentScheme{kOptOut, Vector(in.inst.num_outcomes())}
                                           : PaymentScheme{it.action, reconstruct_payment(in.inst, it.action, it.price,
                                                                                          it.eps)});
    const Rational value = evaluate(in.inst, res.solution);
    json doc = menu_document(in.inst, out, value);
    doc["delta"] = format_rational(params.delta);
    doc["provider_eps"] = format_rational(res.provider_eps);
    json kept = json::array();
    for (std::size_t i : res.kept) kept.push_back(i);
    doc["kept"] = std::move(kept);
    std::ostringstream t;
    t << "robustified menu, delta " << format_rational(params.delta) << ", provider slack " << approx(res.provider_eps)
      << "\nvalue on the given rewards " << approx(value) << "\n"
      << menu_table(in.inst, out) << "decimals are approximate\n";
    emit(o, doc, t.str());
    return kExitOk;
}

int cmd_verify(const Options& o) {
    auto in = load_with_menu(o);
    check_instance(in.inst);
    const std::string kind = detail::field(in.menu, "kind", "menu").get<std::string>();
    json doc;
    std::ostringstream t;
    bool ok = true;
    if (kind == "randomized") {
        auto rep = verify_randomized(in.inst, randomized_menu_from_json(in.inst, in.menu));
        ok = rep.ok();
        doc["kind"] = "randomized";
        doc["ok"] = ok;
        doc["value"] = format_rational(rep.value);
        doc["max_violation"] = {{"provider_ic", format_rational(rep.provider_ic)},
                                {"user_ic", format_rational(rep.user_ic)},
                                {"user_ir", format_rational(rep.user_ir)},
                                {"distribution", format_rational(rep.distribution)},
                                {"negativity", format_rational(rep.negativity)}};
        t << (ok ? "randomized menu is feasible" : "randomized menu violates constraints") << "\nvalue "
          << approx(rep.value) << "\n";
        for (auto& [name, v] : doc["max_violation"].items()) t << "  " << name << " " << v.get<std::string>() << "\n";
    } else {
        auto menu = menu_from_json(in.inst, in.menu);
        Rational eps = nonneg_arg(o.eps, "--eps");
        if (o.eps_from_menu && in.menu.contains("provider_eps"))
            eps = detail::rational_from(in.menu["provider_eps"], "provider_eps");
        auto rep = verify_menu(in.inst, menu, eps);
        ok = rep.ok();
        doc["kind"] = "deterministic";
        doc["ok"] = ok;
        doc["provider_eps"] = format_rational(eps);
        doc["value"] = format_rational(rep.value);
        if (menu.kind == MenuKind::kDirect) doc["direct_value"] = format_rational(rep.direct_value);
        json viol = json::array();
        for (const auto& v : rep.violations) {
            json e{{"constraint", v.constraint}, {"amount", format_rational(v.amount)}};
            if (v.scheme != kOptOut) e["scheme"] = v.scheme;
            if (v.other != kOptOut) e["other"] = v.other;
            viol.push_back(std::move(e));
            t << "  " << v.constraint << " (scheme " << (v.scheme == kOptOut ? std::string("-") : std::to_string(v.scheme))
              << ") by " << approx(v.amount) << "\n";
        }
        doc["violations"] = std::move(viol);
        t << (ok ? "menu passes all checks" : "menu fails") << " (provider slack " << format_rational(eps)
          << ")\nvalue " << approx(rep.value) << "\n";
    }
    emit(o, doc, t.str());
    return ok ? kExitOk : kExitViolation;
}

int cmd_oracle(const Options& o) {
    auto inst = load_instance_arg(o);
    check_instance(inst);
    if (o.k < 1) throw UsageError("--k must be at least 1");
    auto res = brute_force_opt_k(inst, o.k, o.guard);
    json doc = menu_document(inst, res.menu, res.value);
    doc["k"] = o.k;
    doc["enumerated"] = res.enumerated;
    std::ostringstream t;
    t << "brute-force optimum with k = " << o.k << " (" << res.enumerated << " assignments)\nvalue " << approx(res.value)
      << "\n"
      << menu_table(inst, res.menu) << "decimals are approximate\n";
    emit(o, doc, t.str());
    return kExitOk;
}

int cmd_compare(const Options& o) {
    auto inst = load_instance_arg(o);
    check_instance(inst);
    SolveOptions opts;
    opts.threads = o.threads;
    const std::size_t top = std::min(inst.num_types(), inst.num_actions());
    json rows = json::array();
    std::ostringstream t;
    t << std::left << std::setw(12) << "menu" << std::setw(28) << "value" << "approx\n";
    for (std::size_t k = 1; k <= top; ++k) {
        const Rational v = solve_menu_k(inst, k, opts).value;
        rows.push_back({{"k", k}, {"value", format_rational(v)}});
        t << std::setw(12) << ("k = " + std::to_string(k)) << std::setw(28) << format_rational(v) << "~"
          << format_approx(v) << "\n";
    }
    const Rational rv = solve_randomized_lp(inst).value;
    t << std::setw(12) << "randomized" << std::setw(28) << format_rational(rv) << "~" << format_approx(rv) << "\n";
    json doc{{"deterministic", rows}, {"randomized", format_rational(rv)}};
    emit(o, doc, t.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solver for menus of payment schemes in delegation problems"};
    app.require_subcommand(1);
    Options o;

    auto add_io = [&](CLI::App* c) {
        c->add_option("-i,--instance", o.instance, "instance JSON (default: stdin)");
        c->add_option("-o,--output", o.output, "output file (default: stdout)");
        c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "table"}));
    };
    auto add_threads = [&](CLI::App* c) {
        c->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
    };

    auto* gen = app.add_subcommand("gen", "generate an instance");
    gen->add_option("family", o.family, "single-bad, randomized-gap, random or hardness")->required();
    gen->add_option("--n", o.n, "types (vertices for hardness)");
    gen->add_option("--m", o.m, "outcomes (random)");
    gen->add_option("--l", o.l, "actions (random)");
    gen->add_option("--seed", o.seed, "random seed");
    gen->add_option("--graph", o.graph, "hardness graph: edgeless, path or complete");
    gen->add_option("-o,--output", o.output, "output file (default: stdout)");

    auto* det = app.add_subcommand("solve-det", "optimal menu of at most k deterministic schemes");
    add_io(det);
    add_threads(det);
    det->add_option("--k", o.k, "menu size")->required();
    det->add_flag("--direct", o.direct, "emit one scheme per type");

    auto* rnd = app.add_subcommand("solve-rand", "optimal menu of randomized schemes");
    add_io(rnd);

    auto* cont = app.add_subcommand("solve-cont", "continuous action pipeline");
    cont->add_option("--family", o.family, "toy, quadratic, or a tabulated family JSON file")->required();
    cont->add_option("--delta", o.delta, "grid step, a rational in (0, 1]")->required();
    cont->add_option("-o,--output", o.output, "output file (default: stdout)");
    cont->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "table"}));
    add_threads(cont);

    auto* rob = app.add_subcommand("robustify", "make a menu robust to reward errors of size delta");
    add_io(rob);
    rob->add_option("-m,--menu", o.menu, "menu JSON (default: stdin)");
    rob->add_option("--delta", o.delta, "reward error bound")->required();
    rob->add_option("--eps", o.eps, "provider slack of the input menu");

    auto* ver = app.add_subcommand("verify", "check a deterministic or randomized menu");
    add_io(ver);
    ver->add_option("-m,--menu", o.menu, "menu JSON (default: stdin)");
    ver->add_option("--eps", o.eps, "provider slack to allow (default: the menu's provider_eps, else 0)")
        ->each([&](const std::string&) { o.eps_from_menu = false; });

    auto* ora = app.add_subcommand("oracle", "brute-force optimum for small instances");
    add_io(ora);
    ora->add_option("--k", o.k, "menu size")->required();
    ora->add_option("--guard", o.guard, "largest number of LPs to attempt");

    auto* cmp = app.add_subcommand("compare", "OPT_k for every k and the randomized optimum");
    add_io(cmp);
    add_threads(cmp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) return cmd_gen(o);
        if (*det) return cmd_solve_det(o);
        if (*rnd) return cmd_solve_rand(o);
        if (*cont) return cmd_solve_cont(o);
        if (*rob) return cmd_robustify(o);
        if (*ver) return cmd_verify(o);
        if (*ora) return cmd_oracle(o);
        if (*cmp) return cmd_compare(o);
    } catch (const SizeGuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const ViolationExit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolation;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolation;
    } catch (const NotIcError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolation;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
