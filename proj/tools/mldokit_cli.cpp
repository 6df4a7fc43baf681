// mldokit command-line front end: exact computations with quasimodular forms
// and modular linear differential operators, plus named verification suites.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "mldokit/verify.hpp"

namespace {

using namespace mldokit;

// Outcome of one subcommand run, rendered as text or as the JSON envelope.
struct Report {
    std::string subcommand;
    bool ok = true;
    std::vector<std::string> lines;
    json result;
    std::string counterexample;
};

long default_order() {
    if (const char* env = std::getenv("MLDOKIT_ORDER")) {
        try {
            long n = std::stol(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
        throw CLI::ValidationError("MLDOKIT_ORDER", "must be a positive integer");
    }
    return 50;
}

BasisTag basis_from_name(const std::string& name) {
    if (name == "d") return BasisTag::D;
    if (name == "serre") return BasisTag::Serre;
    if (name == "kk") return BasisTag::KK;
    if (name == "vz") return BasisTag::VZ;
    throw CLI::ValidationError("--basis", "must be one of d, serre, kk, vz");
}

void emit(const Report& rep, bool as_json) {
    if (as_json) {
        json out{{"subcommand", rep.subcommand},
                 {"ok", rep.ok},
                 {"result", rep.result},
                 {"counterexample", rep.counterexample.empty() ? json(nullptr) : json(rep.counterexample)}};
        std::cout << out.dump(2) << "\n";
        return;
    }
    for (const auto& line : rep.lines) std::cout << line << "\n";
    if (!rep.ok) std::cout << "FAIL: " << rep.counterexample << "\n";
}

void form_report(Report& rep, const QuasiModularForm& F) {
    rep.lines.push_back(to_string(F));
    rep.result = to_json(F);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computer algebra for quasimodular forms and modular linear differential operators"};
    app.require_subcommand(1);

    bool as_json = false;
    app.add_flag("--json", as_json, "emit a JSON report instead of text");

    long order = 0;
    std::string k_str = "0";
    std::string basis_name = "d";
    std::string alpha_str;
    long n_arg = 1;
    long weight_arg = 0;
    long gain_arg = 0;
    bool ext_flag = false;
    bool serre_flag = false;
    bool normalize_flag = false;
    std::string text1, text2;
    std::vector<std::string> texts;

    Report rep;

    auto add_order = [&](CLI::App* cmd) { cmd->add_option("--order", order, "truncation order"); };
    auto add_k = [&](CLI::App* cmd, bool required = false) {
        auto* opt = cmd->add_option("--k", k_str, "weight parameter, a rational p/q");
        if (required) opt->required();
    };

    CLI::App* c_eval = app.add_subcommand("eval", "q-expansion of a form");
    c_eval->add_option("form", text1, "form expression")->required();
    add_order(c_eval);
    c_eval->callback([&] {
        QuasiModularForm F = parse_form(text1);
        FracPowerSeries s = to_series(F, order);
        rep.lines.push_back(to_string(s));
        rep.result = to_json(s);
    });

    CLI::App* c_derive = app.add_subcommand("derive", "apply D = q d/dq to a form");
    c_derive->add_option("form", text1, "form expression")->required();
    c_derive->add_option("--n", n_arg, "number of derivatives");
    c_derive->callback([&] { form_report(rep, derive(parse_form(text1), n_arg)); });

    CLI::App* c_pi = app.add_subcommand("pi", "project a form onto its modular part");
    c_pi->add_option("form", text1, "form expression")->required();
    c_pi->callback([&] { form_report(rep, project(parse_form(text1))); });

    CLI::App* c_dec = app.add_subcommand("decompose", "expand a form over modified derivatives of modular forms");
    c_dec->add_option("form", text1, "form expression")->required();
    c_dec->callback([&] {
        auto h = derivative_decompose(parse_form(text1));
        json arr = json::array();
        for (std::size_t r = 0; r < h.size(); ++r) {
            rep.lines.push_back("h_" + std::to_string(r) + " = " + to_string(h[r]));
            arr.push_back(to_string(h[r]));
        }
        rep.result = arr;
    });

    CLI::App* c_conv = app.add_subcommand("convert", "express an operator in a chosen generating family");
    c_conv->add_option("operator", text1, "operator expression")->required();
    add_k(c_conv, true);
    c_conv->add_option("--basis", basis_name, "target family: d, serre, kk or vz")->required();
    c_conv->callback([&] {
        Mldo L = parse_operator(text1, parse_rat(k_str));
        auto coeffs = to_basis(L, basis_from_name(basis_name));
        std::string joined;
        json arr = json::array();
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (i) joined += ", ";
            joined += to_string(coeffs[i]);
            arr.push_back(to_string(coeffs[i]));
        }
        rep.lines.push_back(joined);
        rep.result = arr;
    });

    CLI::App* c_br = app.add_subcommand("bracket", "Rankin-Cohen bracket of two forms");
    c_br->add_option("f", text1, "first form")->required();
    c_br->add_option("g", text2, "second form")->required();
    c_br->add_option("--n", n_arg, "bracket index")->required();
    c_br->add_flag("--ext", ext_flag, "use the extended bracket");
    c_br->callback([&] {
        QuasiModularForm F = parse_form(text1), G = parse_form(text2);
        Rat kf(F.weight()), kg(G.weight());
        form_report(rep, ext_flag ? ext_bracket(kf, kg, n_arg, F, G) : rc_bracket(kf, kg, n_arg, F, G));
    });

    CLI::App* c_kk = app.add_subcommand("kk", "Kaneko-Koike operator, applied or symbolic");
    c_kk->add_option("form", text1, "form to apply the operator to");
    add_k(c_kk, true);
    c_kk->add_option("--n", n_arg, "operator order")->required();
    c_kk->callback([&] {
        Rat k = parse_rat(k_str);
        if (text1.empty()) {
            Mldo L = kk_mldo(k, n_arg);
            rep.lines.push_back(to_string(L));
            rep.result = to_json(L);
        } else {
            form_report(rep, kk(k, n_arg, parse_form(text1)));
        }
    });

    CLI::App* c_vz = app.add_subcommand("vz", "canonical higher Serre derivative, applied or symbolic");
    c_vz->add_option("form", text1, "form to apply the operator to");
    add_k(c_vz, true);
    c_vz->add_option("--n", n_arg, "operator order")->required();
    c_vz->callback([&] {
        Rat k = parse_rat(k_str);
        if (text1.empty()) {
            Mldo L = vz_mldo(k, n_arg);
            rep.lines.push_back(to_string(L));
            rep.result = to_json(L);
        } else {
            form_report(rep, vz(k, n_arg, parse_form(text1)));
        }
    });

    CLI::App* c_om = app.add_subcommand("omega", "mediating modular form omega_m");
    c_om->add_option("m", n_arg, "index")->required();
    c_om->callback([&] { form_report(rep, omega(n_arg)); });

    CLI::App* c_pair = app.add_subcommand("pair", "brace pairing of a modular form with a quasimodular form");
    c_pair->add_option("f", text1, "modular or constant form")->required();
    c_pair->add_option("F", text2, "quasimodular form")->required();
    c_pair->callback([&] { form_report(rep, pair_braces(parse_form(text1), parse_form(text2))); });

    CLI::App* c_lam = app.add_subcommand("lambda", "second correspondence operator of a quasimodular form");
    c_lam->add_option("form", text1, "quasimodular form")->required();
    add_k(c_lam, true);
    c_lam->callback([&] {
        Mldo L = lambda_from_qmf(parse_form(text1), parse_rat(k_str));
        rep.lines.push_back(to_string(L));
        rep.result = to_json(L);
    });

    CLI::App* c_solve = app.add_subcommand("solve", "Frobenius series solutions of an operator");
    c_solve->add_option("operator", text1, "operator expression")->required();
    add_k(c_solve, true);
    c_solve->add_option("--alpha", alpha_str, "solve only at this indicial root");
    add_order(c_solve);
    c_solve->callback([&] {
        Mldo L = parse_operator(text1, parse_rat(k_str));
        std::vector<Rat> roots =
            alpha_str.empty() ? indicial_roots(L) : std::vector<Rat>{parse_rat(alpha_str)};
        json arr = json::array();
        for (const Rat& alpha : roots) {
            FrobeniusSolution s = frobenius_solve(L, alpha, order);
            json js = to_json(s);
            rep.lines.push_back(js.dump());
            arr.push_back(std::move(js));
        }
        rep.result = arr;
    });

    CLI::App* c_ker = app.add_subcommand("kernel", "kernel of an operator on the modular forms of its input weight");
    c_ker->add_option("operator", text1, "operator expression")->required();
    add_k(c_ker, true);
    add_order(c_ker);
    c_ker->callback([&] {
        Rat k = parse_rat(k_str);
        Mldo L = parse_operator(text1, k);
        auto ker = kernel_in_Mk(L, to_long(k), order);
        json arr = json::array();
        for (const auto& f : ker) {
            rep.lines.push_back(to_string(f));
            arr.push_back(to_string(f));
        }
        if (ker.empty()) rep.lines.push_back("(trivial kernel)");
        rep.result = arr;
    });

    CLI::App* c_spec = app.add_subcommand("spectrum", "certified eigenvalue list of the weight-k order-2 family");
    c_spec->add_option("--weight", weight_arg, "modular weight k")->required();
    add_order(c_spec);
    c_spec->callback([&] {
        auto spec = kz_spectrum(weight_arg, order);
        json arr = json::array();
        for (const auto& [lambda, n] : spec) {
            rep.lines.push_back("eigenvalue " + rat_str(lambda) + ", eigenform leading exponent " +
                                std::to_string(n));
            arr.push_back(json{{"eigenvalue", rat_str(lambda)}, {"leading_exponent", n}});
        }
        rep.result = arr;
    });

    CLI::App* c_dims = app.add_subcommand("dims", "dimension of the space of modular operators");
    add_k(c_dims, true);
    c_dims->add_option("--K", gain_arg, "operator weight K")->required();
    long n_cap = -1;
    c_dims->add_option("--n", n_cap, "maximal operator order (default K/2)");
    c_dims->callback([&] {
        long n = n_cap < 0 ? gain_arg / 2 : n_cap;
        long d = dim_mldo(parse_rat(k_str), gain_arg, n);
        rep.lines.push_back(std::to_string(d));
        rep.result = d;
    });

    CLI::App* c_det = app.add_subcommand("det", "annihilating operator of the span of given forms");
    c_det->add_option("forms", texts, "form expressions spanning the solution space")->required();
    c_det->add_flag("--serre", serre_flag, "expand along the Serre derivative chain");
    add_k(c_det);
    c_det->add_flag("--normalize", normalize_flag, "divide by the leading coefficient");
    add_order(c_det);
    c_det->callback([&] {
        std::vector<FracPowerSeries> basis;
        for (const auto& t : texts) basis.push_back(to_series(parse_form(t), order));
        SeriesOperator op = det_operator(basis, serre_flag, parse_rat(k_str), normalize_flag);
        json arr = json::array();
        for (std::size_t r = 0; r < op.coeffs.size(); ++r) {
            rep.lines.push_back("coefficient " + std::to_string(r) + ": " + to_string(op.coeffs[r]));
            arr.push_back(to_json(op.coeffs[r]));
        }
        rep.result = arr;
    });

    CLI::App* c_ver = app.add_subcommand("verify", "run named verification suites");
    c_ver->add_option("suites", texts, "suite names (default: all)");
    c_ver->callback([&] {
        std::vector<std::string> names = texts.empty() ? verify_suite_names() : texts;
        json arr = json::array();
        for (const auto& name : names) {
            SuiteResult res = run_suite(name);
            for (const auto& line : res.lines) rep.lines.push_back("  " + line);
            rep.lines.push_back("suite " + name + ": " + (res.ok ? "ok" : "FAIL"));
            if (!res.ok && rep.ok) {
                rep.ok = false;
                rep.counterexample = name + ": " + res.counterexample;
            }
            arr.push_back(json{{"suite", name},
                               {"ok", res.ok},
                               {"counterexample", res.ok ? json(nullptr) : json(res.counterexample)}});
        }
        rep.result = arr;
    });

    try {
        order = default_order();
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        // Mathematical failure surfaced from the library.
        rep.ok = false;
        rep.counterexample = e.what();
        rep.subcommand = app.get_subcommands().empty() ? "" : app.get_subcommands()[0]->get_name();
        emit(rep, as_json);
        return 1;
    }

    rep.subcommand = app.get_subcommands()[0]->get_name();
    emit(rep, as_json);
    return rep.ok ? 0 : 1;
}
