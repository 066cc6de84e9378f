#include "kex/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <set>

#include "kex/json_io.hpp"

namespace kex::cli {

namespace {

using jio::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error("parse error in " + path + ": " + e.what());
    }
    return j;
}

std::vector<Int> parse_support(const std::string& s) {
    std::vector<Int> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.emplace_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

// The invariant-consuming commands accept either a six-term literal (an
// invariant is built with the default support) or a full invariant dump.
CoeffInvariant invariant_from_input(const json& j, const std::vector<Int>& support_override) {
    if (j.contains("base")) {
        CoeffInvariant inv = jio::invariant_from_json(j);
        VerifyReport rep = verify_invariant(inv);
        if (!rep.pass)
            throw verification_error("input invariant fails relation '" +
                                     rep.first_failure()->name + "'");
        return inv;
    }
    if (j.contains("groups")) {
        SixTerm s = jio::sixterm_from_json(j);
        std::vector<Int> spt = support_override.empty() ? default_support(s) : support_override;
        return build_invariant(s, spt);
    }
    throw input_error("input must be a six-term or an invariant literal");
}

struct Options {
    std::string command;
    std::string input, second, output;
    std::string support;
    std::string format = "json";
};

json dispatch(const Options& opt) {
    std::vector<Int> support = parse_support(opt.support);
    if (opt.command == "ktheory") {
        CKInput ck = jio::ck_from_json(load_json(opt.input));
        return jio::sixterm_to_json(ck_ktheory(ck));
    }
    if (opt.command == "invariant") {
        SixTerm s = jio::sixterm_from_json(load_json(opt.input));
        std::vector<Int> spt = support.empty() ? default_support(s) : support;
        return jio::invariant_to_json(build_invariant(s, spt));
    }
    if (opt.command == "verify") {
        CoeffInvariant inv = jio::invariant_from_json(load_json(opt.input));
        VerifyReport rep = verify_invariant(inv);
        json out = jio::verify_report_to_json(rep);
        if (!rep.pass)
            throw verification_error("relation '" + rep.first_failure()->name + "' fails\n" +
                                     out.dump(2));
        return out;
    }
    if (opt.command == "resolve") {
        SixTerm s = jio::sixterm_from_json(load_json(opt.input));
        Resolution res = build_resolution(s);
        json out = jio::resolution_to_json(res);
        json kernels = json::array();
        std::vector<Int> seen;
        for (const Int& q : res.dec.prime_power_orders()) {
            if (std::find(seen.begin(), seen.end(), q) != seen.end()) continue;
            seen.push_back(q);
            json k = jio::hkernel_to_json(kernel_on_H(res, q));
            k["n"] = jio::int_to_json(q);
            kernels.push_back(std::move(k));
        }
        out["h_kernels"] = kernels;
        SixTerm target = opt.second.empty() ? s : jio::sixterm_from_json(load_json(opt.second));
        std::vector<Int> spt = support_join({s, target});
        out["hom_sequence"] =
            jio::homseq_report_to_json(hom_sequence_report(res, build_invariant(target, spt)));
        return out;
    }
    if (opt.command == "hom") {
        if (opt.second.empty()) throw input_error("hom needs --second");
        json j1 = load_json(opt.input);
        json j2 = load_json(opt.second);
        // Unify supports when building from six-term inputs.
        std::vector<Int> spt = support;
        if (spt.empty() && j1.contains("groups") && j2.contains("groups"))
            spt = support_join(
                {jio::sixterm_from_json(j1), jio::sixterm_from_json(j2)});
        CoeffInvariant a = invariant_from_input(j1, spt);
        CoeffInvariant b = invariant_from_input(j2, spt);
        return jio::hom_group_to_json(hom_lambda_red(a, b));
    }
    if (opt.command == "aut") {
        CoeffInvariant inv = invariant_from_input(load_json(opt.input), support);
        return jio::aut_report_to_json(aut_lambda_red(inv));
    }
    if (opt.command == "oracle") {
        json j1 = load_json(opt.input);
        CoeffInvariant a = invariant_from_input(j1, support);
        CoeffInvariant b =
            opt.second.empty() ? a : invariant_from_input(load_json(opt.second), support);
        HomLambdaGroup solved = hom_lambda_red(a, b);
        std::vector<CoeffHom> brute = brute_force_hom_lambda(a, b);
        std::set<std::string> solver_keys, brute_keys;
        for (const auto& coords : all_elements(solved.group))
            solver_keys.insert(coeff_hom_key(solved.from_element(coords)));
        for (const CoeffHom& h : brute) brute_keys.insert(coeff_hom_key(h));
        bool match = solver_keys == brute_keys;
        json out{{"match", match},
                 {"solver_count", solver_keys.size()},
                 {"brute_count", brute_keys.size()},
                 {"hom_group", jio::group_to_json(solved.group)}};
        if (!match) throw verification_error("solver and oracle disagree\n" + out.dump(2));
        return out;
    }
    throw input_error("unknown command: " + opt.command);
}

}  // namespace

RunResult run(const std::vector<std::string>& args) {
    RunResult res;
    Options opt;

    CLI::App app{"six-term K-data toolkit"};
    app.require_subcommand(1);
    for (const char* name : {"ktheory", "invariant", "verify", "resolve", "hom", "aut",
                             "oracle"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--input", opt.input)->required();
        sub->add_option("--second", opt.second);
        sub->add_option("--support", opt.support);
        sub->add_option("--output", opt.output);
        sub->add_option("--format", opt.format)
            ->check(CLI::IsMember({"json", "text"}));
        sub->callback([&opt, name] { opt.command = name; });
    }

    std::vector<const char*> argv{"kex"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        res.exit_code = 2;
        res.error = std::string("argument error: ") + e.what();
        return res;
    }

    try {
        json out = dispatch(opt);
        res.output = opt.format == "text" ? jio::render_text(out) : out.dump(2) + "\n";
        if (!opt.output.empty()) {
            std::ofstream of(opt.output);
            if (!of) throw input_error("cannot write output file: " + opt.output);
            of << res.output;
        }
        return res;
    } catch (const input_error& e) {
        res.exit_code = 2;
        res.error = e.what();
    } catch (const verification_error& e) {
        res.exit_code = 3;
        res.error = e.what();
    } catch (const construction_error& e) {
        res.exit_code = 3;
        res.error = e.what();
    } catch (const internal_error& e) {
        res.exit_code = 4;
        res.error = e.what();
    } catch (const std::exception& e) {
        res.exit_code = 4;
        res.error = e.what();
    }
    return res;
}

}  // namespace kex::cli
