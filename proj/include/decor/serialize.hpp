#pragma once

#include <json.hpp>
#include <string>

#include "decor/expand.hpp"
#include "decor/kernel.hpp"
#include "decor/suites.hpp"

namespace decor {

using json = nlohmann::ordered_json;

json to_json(const Derivation& d);
json to_json(const CheckReport& r);
json to_json(const FiniteModel& m, const CheckResult& r);
json to_json(const FiniteModel& m, const Witness& w);
json to_json(const FiniteModel& m, const SuiteReport& r);
json to_json(const Theory& th);
json to_json(const ExplicitTheory& th);

// Indented rule tree, conclusion first, premises below.
std::string render_tree(const Derivation& d);
std::string render_witness(const FiniteModel& m, const Witness& w);

// Proof-script form of a derivation: one step per node, premises first.
// Lemma labels survive as comments only.
std::string render_steps(const Derivation& d, const std::string& indent = "  ");

std::string to_string(const Meta& m);

}  // namespace decor
