#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "treeshift/dynamics.hpp"
#include "treeshift/function.hpp"
#include "treeshift/matrix_oracle.hpp"
#include "treeshift/shadowing.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

namespace treeshift {

// Tree spec documents, schema "treeshift/tree/v1":
//   {"schema": "treeshift/tree/v1", "kind": "finite", "root": "a",
//    "edges": [["a","b"], ["a","c"]]}
//   {"schema": "treeshift/tree/v1", "kind": "family",
//    "family": "kary_unrooted", "params": {"k": 2, "window": {"up": 8, "down": 8}}}
// Family params accept optional "graft_at" (grafted_free_end) and "opaque".
TreeModel load_tree_spec_text(const std::string& json_text);

// Axioms checked on the raw edge list of a finite spec; family specs are
// reported valid once their parameters construct.
ValidationReport validate_tree_spec_text(const std::string& json_text);

// Weight spec documents, schema "treeshift/weights/v1":
//   {"schema": "treeshift/weights/v1", "kind": "unit"}
//   {..., "kind": "geometric", "base": 0.5}
//   {..., "kind": "distance_to_H", "s": 3.0, "anchor": "^0"}
//   {..., "kind": "table", "entries": {"a": 1.0, "b": 0.5}}
WeightMap load_weight_spec_text(const std::string& json_text, const TreeModel& model);

// Functions travel as a JSON list of {"address", "re", "im"}.
TreeFunction load_function_text(const std::string& json_text, const TreeModel& model);
std::string save_function_json(const TreeFunction& f, const TreeModel& model);

// An array of function documents (shadowing targets).
std::vector<TreeFunction> load_function_list_text(const std::string& json_text,
                                                  const TreeModel& model);

std::string to_string(DecayQuantity q);
std::string to_string(DecayVerdict v);
std::string to_string(HypercyclicityVerdict::Outcome o);
std::string to_string(HypercyclicityVerdict::Reason r);
DecayQuantity parse_decay_quantity(const std::string& text);

std::string decay_report_json(const DecayReport& report, const TreeModel& model);
// Header block of "# key,value" lines, then "vertex,n,value" rows.
void write_decay_csv(std::ostream& os, const DecayReport& report, const TreeModel& model);

std::string verdict_json(const HypercyclicityVerdict& verdict, const TreeModel& model,
                         const std::string& operator_name);

std::string shadow_plan_json(const ShadowPlan& plan, const TreeModel& model);
// Header block, then "k,n_k,error" rows (k is 1-based).
void write_shadow_csv(std::ostream& os, const ShadowPlan& plan,
                      const std::vector<double>& errors, double norm);

// Dense dump: header block, "# columns" legend, one "<vertex>,a_i1,..." row
// per window vertex.
void write_matrix_csv(std::ostream& os, const TruncatedOperator& op, const TreeModel& model);

// Whole file as a string; InputError with the path on failure.
std::string read_text_file(const std::string& path);

}  // namespace treeshift
