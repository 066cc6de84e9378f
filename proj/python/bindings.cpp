#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kex/cli.hpp"
#include "kex/json_io.hpp"

namespace py = pybind11;
using namespace kex;
using jio::json;

namespace {

std::string ktheory_str(const std::string& ck_json) {
    return jio::sixterm_to_json(ck_ktheory(jio::ck_from_json(json::parse(ck_json)))).dump();
}

std::string check_exact_str(const std::string& sixterm_json) {
    return jio::exact_report_to_json(check_exact(jio::sixterm_from_json(json::parse(sixterm_json))))
        .dump();
}

std::string suspend_str(const std::string& sixterm_json) {
    return jio::sixterm_to_json(suspend(jio::sixterm_from_json(json::parse(sixterm_json)))).dump();
}

std::string class_flags_str(const std::string& sixterm_json) {
    return jio::class_flags_to_json(class_flags(jio::sixterm_from_json(json::parse(sixterm_json))))
        .dump();
}

std::vector<std::string> default_support_py(const std::string& sixterm_json) {
    std::vector<std::string> out;
    for (const Int& n : default_support(jio::sixterm_from_json(json::parse(sixterm_json))))
        out.push_back(n.get_str());
    return out;
}

std::vector<Int> support_of(const std::vector<std::string>& support) {
    std::vector<Int> out;
    for (const std::string& s : support) out.emplace_back(s);
    return out;
}

std::string build_invariant_str(const std::string& sixterm_json,
                                const std::vector<std::string>& support) {
    SixTerm s = jio::sixterm_from_json(json::parse(sixterm_json));
    std::vector<Int> spt = support.empty() ? default_support(s) : support_of(support);
    return jio::invariant_to_json(build_invariant(s, spt)).dump();
}

std::string verify_invariant_str(const std::string& invariant_json) {
    return jio::verify_report_to_json(
               verify_invariant(jio::invariant_from_json(json::parse(invariant_json))))
        .dump();
}

std::string smith_str(const std::string& matrix_json) {
    json j = json::parse(matrix_json);
    std::size_t rows = j.size();
    std::size_t cols = rows == 0 ? 0 : j[0].size();
    SmithResult r = smith_normal_form(jio::matrix_from_json(j, rows, cols));
    return json{{"u", jio::matrix_to_json(r.u)},
                {"d", jio::matrix_to_json(r.d)},
                {"v", jio::matrix_to_json(r.v)}}
        .dump();
}

py::tuple run_cli(const std::vector<std::string>& args) {
    cli::RunResult r = cli::run(args);
    return py::make_tuple(r.exit_code, r.output, r.error);
}

}  // namespace

PYBIND11_MODULE(kexpy, m) {
    m.doc() = "six-term K-data toolkit (JSON-string API)";
    m.def("ktheory", &ktheory_str, "six-term K-data of an adjacency-matrix input");
    m.def("check_exact", &check_exact_str);
    m.def("suspend", &suspend_str);
    m.def("class_flags", &class_flags_str);
    m.def("default_support", &default_support_py);
    m.def("build_invariant", &build_invariant_str, py::arg("sixterm"),
          py::arg("support") = std::vector<std::string>{});
    m.def("verify_invariant", &verify_invariant_str);
    m.def("smith_normal_form", &smith_str);
    m.def("run_cli", &run_cli, "run a CLI command; returns (exit_code, output, error)");
}
