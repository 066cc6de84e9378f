#pragma once
#include <json.hpp>

#include "kex/homsolver.hpp"
#include "kex/resolution.hpp"

namespace kex::jio {

using nlohmann::json;

// Integers are emitted as JSON numbers when they fit in 64 bits and as
// decimal strings otherwise; both forms parse.
json int_to_json(const Int& v);
Int int_from_json(const json& j);

json matrix_to_json(const IntMat& m);
IntMat matrix_from_json(const json& j, std::size_t rows, std::size_t cols);

json group_to_json(const FgAb& g);
FgAb group_from_json(const json& j);

json hom_to_json(const Hom& h);
Hom hom_from_json(const json& j);

json sixterm_to_json(const SixTerm& s);
SixTerm sixterm_from_json(const json& j);

json ck_to_json(const CKInput& ck);
CKInput ck_from_json(const json& j);

json invariant_to_json(const CoeffInvariant& inv);
CoeffInvariant invariant_from_json(const json& j);

json coeff_hom_to_json(const CoeffHom& h);

json exact_report_to_json(const ExactReport& r);
json verify_report_to_json(const VerifyReport& r);
json class_flags_to_json(const ClassFlags& f);
json hom_group_to_json(const HomLambdaGroup& g);
json aut_report_to_json(const AutReport& r);
json resolution_to_json(const Resolution& r);
json hkernel_to_json(const HKernelResult& r);
json homseq_report_to_json(const HomSequenceReport& r);

// Human-readable rendering of a report tree.
std::string render_text(const json& j);

}  // namespace kex::jio
