#pragma once

#include <string>

#include "json.hpp"

#include "doi/bounds.hpp"
#include "doi/random_ensemble.hpp"
#include "doi/spectral.hpp"
#include "doi/verification.hpp"

namespace doi {

// Insertion-ordered JSON so serialized reports are byte-stable.
using Json = nlohmann::ordered_json;

// Matrix wire format: {"n": n, "entries": [[[re, im], ...] per row ...]}.
Json matrix_to_json(const CMat& a);
CMat matrix_from_json(const Json& j);

// Structure wire format: {"blocks": [{"re": .., "im": .., "size": ..}, ...]}.
Json spec_to_json(const JordanStructureSpec& spec);
JordanStructureSpec spec_from_json(const Json& j);

Json decomposition_to_json(const SpectralDecomposition& dec);
SpectralDecomposition decomposition_from_json(const Json& j);

Json validation_to_json(const ValidationReport& rep);
Json bound_report_to_json(const BoundReport& rep);
Json suite_report_to_json(const SuiteReport& rep);

Json ensemble_to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_from_json(const Json& j);

Json tail_result_to_json(const TailExperimentResult& res);
// Columns: delta, empirical_freq, markov_bound, margin.
std::string tail_result_to_csv(const TailExperimentResult& res);

Json load_json_file(const std::string& path);  // throws InvalidInput
void write_text_file(const std::string& path, const std::string& content);
std::string dump_json(const Json& j);  // canonical two-space indentation

}  // namespace doi
