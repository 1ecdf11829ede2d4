// exm: exact measure and integration calculator.
//
// Verbs map one-to-one onto library operations; all results go to stdout,
// all diagnostics to stderr. Exit codes: 0 success, 1 a check failed (the
// report is still printed), 2 parse or domain error.

#include <CLI11.hpp>
#include <json.hpp>

#include <exm/exm.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

using json = nlohmann::ordered_json;
using namespace exm;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw domain_error("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --family accepts either an inline spec or @file.
std::string family_text(const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') return read_file(spec.substr(1));
    return spec;
}

std::vector<std::string> witness_names(const FiniteUniverse& u,
                                       const std::vector<mask_t>& sets) {
    std::vector<std::string> out;
    for (mask_t m : sets) out.push_back(to_string(u, m));
    return out;
}

json measure_report_json(const FiniteUniverse& u, const MeasureReport& r) {
    json j;
    j["holds"] = r.holds;
    j["exhaustive"] = r.exhaustive;
    json vs = json::array();
    for (const auto& v : r.violations)
        vs.push_back({{"axiom", v.axiom}, {"witness", witness_names(u, v.sets)}});
    j["violations"] = vs;
    return j;
}

void print_measure_report(std::ostream& os, const std::string& label,
                          const FiniteUniverse& u, const MeasureReport& r) {
    os << label << ": " << (r.holds ? "pass" : "fail") << "\n";
    for (const auto& v : r.violations) {
        os << "violation: " << v.axiom;
        for (mask_t m : v.sets) os << " " << to_string(u, m);
        os << "\n";
    }
}

struct Options {
    bool json_mode = false;
};

int run(int argc, char** argv) {
    CLI::App app{"exact measure theory calculator"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--json", opt.json_mode, "structured output");

    std::string expr, domain = "(-inf,inf]", kind, universe, family, weights_file,
                table_file;

    auto* c_measure = app.add_subcommand("measure", "length measure of an interval set");
    c_measure->add_option("set", expr, "set expression")->required();

    auto* c_integrate = app.add_subcommand("integrate", "integral of a step function");
    c_integrate->add_option("fn", expr, "step function expression")->required();
    c_integrate->add_option("--domain", domain, "domain of integration");

    auto* c_decomp = app.add_subcommand("decomp", "disjoint interval decomposition");
    c_decomp->add_option("set", expr, "set expression")->required();

    auto* c_check = app.add_subcommand("check-structure", "class-of-sets axioms");
    c_check->add_option("--kind", kind)->required();
    c_check->add_option("--universe", universe)->required();
    c_check->add_option("--family", family)->required();

    auto* c_generate = app.add_subcommand("generate", "smallest closed family");
    c_generate->add_option("--kind", kind)->required();
    c_generate->add_option("--universe", universe)->required();
    c_generate->add_option("--family", family)->required();

    auto* c_outer = app.add_subcommand("outer", "outer-measure table by cover minima");
    c_outer->add_option("--universe", universe)->required();
    c_outer->add_option("--family", family)->required();
    c_outer->add_option("--weights", weights_file);
    c_outer->add_option("--table", table_file);

    auto* c_cara = app.add_subcommand("caratheodory", "measurable sets of an outer measure");
    c_cara->add_option("--universe", universe)->required();
    c_cara->add_option("--family", family);
    c_cara->add_option("--weights", weights_file);
    c_cara->add_option("--table", table_file);

    auto* c_fubini = app.add_subcommand("fubini", "iterated integrals of a plane step fn");
    c_fubini->add_option("fn", expr, "2-D step function expression")->required();

    auto* c_product = app.add_subcommand("product", "product measure of a rectangle union");
    c_product->add_option("set", expr, "rectangle union expression")->required();

    CLI11_PARSE(app, argc, argv);

    json out;
    int exit_code = 0;

    if (*c_measure) {
        const IntervalSet s = parse_set_expr(expr);
        const XReal v = lebesgue_measure(s);
        if (opt.json_mode) {
            out = {{"verb", "measure"}, {"set", to_string(s)}, {"value", to_string(v)}};
        } else {
            std::cout << to_string(v) << "\n";
        }
    } else if (*c_integrate) {
        const auto fn = parse_stepfn_expr(expr);
        if (!std::holds_alternative<StepFn>(fn))
            throw domain_error("integrate: expected a 1-D step function");
        const IntervalSet d = parse_set_expr(domain);
        const XReal v = integrate(MeasureSpec::lebesgue(), d, std::get<StepFn>(fn));
        if (opt.json_mode) {
            out = {{"verb", "integrate"},
                   {"fn", to_string(std::get<StepFn>(fn))},
                   {"domain", to_string(d)},
                   {"value", to_string(v)}};
        } else {
            std::cout << to_string(v) << "\n";
        }
    } else if (*c_decomp) {
        const IntervalSet s = parse_set_expr(expr);
        if (opt.json_mode) {
            json comps = json::array();
            for (const auto& c : s.components()) comps.push_back(to_string(c));
            out = {{"verb", "decomp"}, {"components", comps}};
        } else {
            for (const auto& c : s.components()) std::cout << to_string(c) << "\n";
        }
    } else if (*c_check) {
        const FiniteUniverse u = parse_universe(universe);
        const FiniteFamily f = parse_family(u, family_text(family));
        const SetClass k = set_class_from_string(kind);
        const ClassReport r = check_class(k, f);
        if (!r.holds) exit_code = 1;
        if (opt.json_mode) {
            json vs = json::array();
            for (const auto& v : r.violations)
                vs.push_back({{"law", v.law}, {"witness", witness_names(u, v.witness)}});
            out = {{"verb", "check-structure"},
                   {"kind", to_string(k)},
                   {"holds", r.holds},
                   {"violations", vs}};
        } else {
            std::cout << "kind: " << to_string(k) << "\n";
            std::cout << "holds: " << (r.holds ? "true" : "false") << "\n";
            for (const auto& v : r.violations) {
                std::cout << "violation: " << v.law;
                for (mask_t m : v.witness) std::cout << " " << to_string(u, m);
                std::cout << "\n";
            }
        }
    } else if (*c_generate) {
        const FiniteUniverse u = parse_universe(universe);
        const FiniteFamily f = parse_family(u, family_text(family));
        const FiniteFamily closed = generate_closure(set_class_from_string(kind), f);
        if (opt.json_mode) {
            out = {{"verb", "generate"},
                   {"kind", kind},
                   {"family", to_string(closed)}};
        } else {
            std::cout << to_string(closed) << "\n";
        }
    } else if (*c_outer) {
        const FiniteUniverse u = parse_universe(universe);
        const FiniteFamily s = parse_family(u, family_text(family));
        SetFunction mu(u);
        if (!weights_file.empty()) {
            const WeightMeasure wm(u, parse_weights(u, read_file(weights_file)), s);
            mu = SetFunction::of_weights_on(wm, s);
        } else if (!table_file.empty()) {
            mu = parse_table(u, read_file(table_file));
        } else {
            throw domain_error("outer: needs --weights or --table");
        }
        const OuterTable ot = outer_extend(mu, s);
        if (opt.json_mode) {
            json rows = json::array();
            for (mask_t m = 0; m <= u.full_mask(); ++m)
                rows.push_back({{"set", to_string(u, m)}, {"value", to_string(ot.value(m))}});
            out = {{"verb", "outer"}, {"table", rows}};
        } else {
            for (mask_t m = 0; m <= u.full_mask(); ++m)
                std::cout << to_string(u, m) << " " << to_string(ot.value(m)) << "\n";
        }
    } else if (*c_cara) {
        const FiniteUniverse u = parse_universe(universe);
        OuterTable ot(u, std::vector<XReal>(std::size_t(1) << u.size()));
        if (!table_file.empty()) {
            const SetFunction t = parse_table(u, read_file(table_file));
            std::vector<XReal> values;
            for (mask_t m = 0; m <= u.full_mask(); ++m) values.push_back(t.at(m));
            ot = OuterTable(u, std::move(values));
        } else if (!family.empty() && !weights_file.empty()) {
            const FiniteFamily s = parse_family(u, family_text(family));
            const WeightMeasure wm(u, parse_weights(u, read_file(weights_file)), s);
            ot = outer_extend(SetFunction::of_weights_on(wm, s), s);
        } else {
            throw domain_error("caratheodory: needs --table, or --family with --weights");
        }
        const MeasureReport axioms = check_outer_axioms(ot);
        FiniteFamily cara(u, {});
        MeasureReport restricted;
        CompletenessReport comp;
        if (axioms.holds) {
            cara = caratheodory_sets(ot);
            SetFunction restricted_mu(u);
            for (mask_t m : cara.members()) restricted_mu.define(m, ot.value(m));
            restricted = check_measure_axioms(restricted_mu, cara);
            comp = completeness_report(restricted_mu, cara);
        }
        if (!(axioms.holds && restricted.holds && comp.complete)) exit_code = 1;
        if (opt.json_mode) {
            out = {{"verb", "caratheodory"},
                   {"outer_axioms", measure_report_json(u, axioms)}};
            if (axioms.holds) {
                out["family"] = to_string(cara);
                out["measure_axioms"] = measure_report_json(u, restricted);
                out["complete"] = comp.complete;
            }
        } else {
            print_measure_report(std::cout, "outer-axioms", u, axioms);
            if (axioms.holds) {
                std::cout << to_string(cara) << "\n";
                print_measure_report(std::cout, "measure-axioms", u, restricted);
                std::cout << "complete: " << (comp.complete ? "true" : "false") << "\n";
            }
        }
    } else if (*c_fubini) {
        const auto fn = parse_stepfn_expr(expr);
        if (!std::holds_alternative<StepFn2>(fn))
            throw domain_error("fubini: expected a 2-D step function");
        const FubiniReport r =
            fubini_check(MeasureSpec::lebesgue(), MeasureSpec::lebesgue(),
                         std::get<StepFn2>(fn));
        if (!r.equal) exit_code = 1;
        if (opt.json_mode) {
            out = {{"verb", "fubini"},
                   {"lhs", to_string(r.lhs)},
                   {"rhs", to_string(r.rhs)},
                   {"direct", to_string(r.direct)},
                   {"equal", r.equal}};
        } else {
            std::cout << "lhs: " << to_string(r.lhs) << "\n";
            std::cout << "rhs: " << to_string(r.rhs) << "\n";
            std::cout << "direct: " << to_string(r.direct) << "\n";
            std::cout << "equal: " << (r.equal ? "true" : "false") << "\n";
        }
    } else if (*c_product) {
        const auto rects = parse_rect_union(expr);
        const XReal v =
            product_measure(MeasureSpec::lebesgue(), MeasureSpec::lebesgue(), rects);
        if (opt.json_mode) {
            out = {{"verb", "product"}, {"value", to_string(v)}};
        } else {
            std::cout << to_string(v) << "\n";
        }
    }

    if (opt.json_mode) std::cout << out.dump(2) << "\n";
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
