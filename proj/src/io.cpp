#include "treeshift/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "treeshift/errors.hpp"
#include "treeshift/numerics.hpp"

namespace treeshift {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("JSON parse failure: ") + e.what());
  }
}

const json& need(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw InputError(std::string("missing field \"") + field + "\"");
  return *it;
}

std::string need_string(const json& j, const char* field) {
  const json& v = need(j, field);
  if (!v.is_string()) throw InputError(std::string("field \"") + field + "\" must be a string");
  return v.get<std::string>();
}

double need_number(const json& j, const char* field) {
  const json& v = need(j, field);
  if (!v.is_number()) throw InputError(std::string("field \"") + field + "\" must be a number");
  return v.get<double>();
}

std::uint32_t need_uint(const json& j, const char* field) {
  const json& v = need(j, field);
  if (!v.is_number_unsigned())
    throw InputError(std::string("field \"") + field + "\" must be a nonnegative integer");
  return v.get<std::uint32_t>();
}

void check_schema(const json& j, const char* id) {
  if (need_string(j, "schema") != id)
    throw InputError(std::string("expected schema \"") + id + "\"");
}

std::vector<std::pair<std::string, std::string>> read_edges(const json& j) {
  const json& e = need(j, "edges");
  if (!e.is_array()) throw InputError("field \"edges\" must be an array of [parent, child]");
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(e.size());
  for (const auto& row : e) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_string() || !row[1].is_string())
      throw InputError("each edge must be a [parent, child] pair of strings");
    edges.emplace_back(row[0].get<std::string>(), row[1].get<std::string>());
  }
  return edges;
}

DepthWindow read_window(const json& params) {
  const json& w = need(params, "window");
  if (!w.is_object()) throw InputError("field \"window\" must be {\"up\", \"down\"}");
  return DepthWindow{need_uint(w, "up"), need_uint(w, "down")};
}

json function_to_json(const TreeFunction& f, const TreeModel& model) {
  json out = json::array();
  for (const auto& [v, a] : f.entries())
    out.push_back({{"address", model.format(v)}, {"re", a.real()}, {"im", a.imag()}});
  return out;
}

json series_grid_json(const std::vector<std::uint32_t>& grid) {
  json out = json::array();
  for (auto n : grid) out.push_back(n);
  return out;
}

}  // namespace

TreeModel load_tree_spec_text(const std::string& json_text) {
  const json j = parse(json_text);
  check_schema(j, "treeshift/tree/v1");
  const std::string kind = need_string(j, "kind");
  if (kind == "finite") {
    std::optional<std::string> root;
    if (j.contains("root")) root = need_string(j, "root");
    return TreeModel::finite(read_edges(j), root);
  }
  if (kind != "family") throw InputError("kind must be \"finite\" or \"family\"");
  const std::string family = need_string(j, "family");
  const json& params = need(j, "params");
  if (!params.is_object()) throw InputError("field \"params\" must be an object");
  const DepthWindow w = read_window(params);
  const bool opaque = params.contains("opaque") && params["opaque"].is_boolean()
                          ? params["opaque"].get<bool>()
                          : false;
  if (family == "kary_rooted") return TreeModel::kary_rooted(need_uint(params, "k"), w, opaque);
  if (family == "kary_unrooted")
    return TreeModel::kary_unrooted(need_uint(params, "k"), w, opaque);
  if (family == "bilateral_line") return TreeModel::bilateral_line(w, opaque);
  if (family == "unilateral_leaf_line") return TreeModel::unilateral_leaf_line(w, opaque);
  if (family == "grafted_free_end")
    return TreeModel::grafted_free_end(need_uint(params, "k"),
                                       VertexAddress::parse(need_string(params, "graft_at")), w,
                                       opaque);
  throw InputError("unknown family \"" + family + "\"");
}

ValidationReport validate_tree_spec_text(const std::string& json_text) {
  const json j = parse(json_text);
  check_schema(j, "treeshift/tree/v1");
  const std::string kind = need_string(j, "kind");
  if (kind == "finite") {
    std::optional<std::string> root;
    if (j.contains("root")) root = need_string(j, "root");
    return validate_edges(read_edges(j), root);
  }
  load_tree_spec_text(json_text);  // family: parameter errors surface as InputError
  return {};
}

WeightMap load_weight_spec_text(const std::string& json_text, const TreeModel& model) {
  const json j = parse(json_text);
  check_schema(j, "treeshift/weights/v1");
  const std::string kind = need_string(j, "kind");
  if (kind == "unit") return WeightMap::unit();
  if (kind == "geometric") return WeightMap::geometric(need_number(j, "base"));
  if (kind == "distance_to_H")
    return WeightMap::distance_to_h(need_number(j, "s"),
                                    model.resolve(need_string(j, "anchor")));
  if (kind == "table") {
    const json& entries = need(j, "entries");
    if (!entries.is_object()) throw InputError("field \"entries\" must be an object");
    WeightMap::Table table;
    for (const auto& [key, value] : entries.items()) {
      if (!value.is_number())
        throw InputError("weight for \"" + key + "\" must be a number");
      table[model.resolve(key)] = value.get<double>();
    }
    return WeightMap::table(std::move(table));
  }
  throw InputError("unknown weight kind \"" + kind + "\"");
}

namespace {

TreeFunction function_from_json(const json& j, const TreeModel& model) {
  if (!j.is_array()) throw InputError("a function document is a JSON array of entries");
  TreeFunction f;
  for (const auto& entry : j) {
    if (!entry.is_object()) throw InputError("each function entry must be an object");
    const VertexAddress v = model.resolve(need_string(entry, "address"));
    f.add(v, {need_number(entry, "re"), need_number(entry, "im")});
  }
  return f;
}

}  // namespace

TreeFunction load_function_text(const std::string& json_text, const TreeModel& model) {
  return function_from_json(parse(json_text), model);
}

std::vector<TreeFunction> load_function_list_text(const std::string& json_text,
                                                  const TreeModel& model) {
  const json j = parse(json_text);
  if (!j.is_array()) throw InputError("a target list is a JSON array of function documents");
  std::vector<TreeFunction> out;
  out.reserve(j.size());
  for (const auto& doc : j) out.push_back(function_from_json(doc, model));
  return out;
}

std::string save_function_json(const TreeFunction& f, const TreeModel& model) {
  return function_to_json(f, model).dump(2);
}

std::string to_string(DecayQuantity q) {
  switch (q) {
    case DecayQuantity::Omega: return "Omega";
    case DecayQuantity::Theta: return "Theta";
    case DecayQuantity::OmegaStar: return "OmegaStar";
    case DecayQuantity::NecessarySum: return "NecessarySum";
  }
  return "Omega";
}

std::string to_string(DecayVerdict v) {
  switch (v) {
    case DecayVerdict::DecaysToZero: return "DecaysToZero";
    case DecayVerdict::DivergesToInfinity: return "DivergesToInfinity";
    case DecayVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(HypercyclicityVerdict::Outcome o) {
  using O = HypercyclicityVerdict::Outcome;
  switch (o) {
    case O::NotHC: return "NotHC";
    case O::HC: return "HC";
    case O::ReducesToSalas: return "ReducesToSalas";
    case O::EvidenceOnly: return "EvidenceOnly";
  }
  return "EvidenceOnly";
}

std::string to_string(HypercyclicityVerdict::Reason r) {
  using R = HypercyclicityVerdict::Reason;
  switch (r) {
    case R::Rooted: return "Rooted";
    case R::Branching: return "Branching";
    case R::Leaf: return "Leaf";
    case R::FreeEnd: return "FreeEnd";
    case R::NecessaryFails: return "NecessaryFails";
    case R::NoFreeEndUnweighted: return "NoFreeEndUnweighted";
    case R::SufficientConditionMet: return "SufficientConditionMet";
    case R::BilateralLine: return "BilateralLine";
    case R::UnilateralLeafLine: return "UnilateralLeafLine";
    case R::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

DecayQuantity parse_decay_quantity(const std::string& text) {
  if (text == "omega" || text == "Omega") return DecayQuantity::Omega;
  if (text == "theta" || text == "Theta") return DecayQuantity::Theta;
  if (text == "omega_star" || text == "OmegaStar") return DecayQuantity::OmegaStar;
  if (text == "necessary_sum" || text == "NecessarySum") return DecayQuantity::NecessarySum;
  throw InputError("unknown quantity \"" + text +
                   "\" (expect omega, theta, omega_star, necessary_sum)");
}

namespace {

json decay_to_json(const DecayReport& report, const TreeModel& model) {
  json series = json::array();
  for (const auto& s : report.series) {
    json values = json::array();
    for (double v : s.values) values.push_back(v);
    series.push_back({{"vertex", model.format(s.vertex)},
                      {"values", values},
                      {"fitted_ratio", s.fitted_ratio},
                      {"verdict", to_string(s.verdict)}});
  }
  return json{{"quantity", to_string(report.quantity)},
              {"q", report.q},
              {"grid", series_grid_json(report.grid)},
              {"series", series},
              {"verdict", to_string(report.verdict)},
              {"used_subsequence", report.used_subsequence},
              {"subsequence", series_grid_json(report.subsequence)},
              {"note", report.note}};
}

}  // namespace

std::string decay_report_json(const DecayReport& report, const TreeModel& model) {
  return decay_to_json(report, model).dump(2);
}

void write_decay_csv(std::ostream& os, const DecayReport& report, const TreeModel& model) {
  os << "# quantity," << to_string(report.quantity) << "\n";
  os << "# q," << format_double(report.q) << "\n";
  os << "# verdict," << to_string(report.verdict) << "\n";
  os << "# used_subsequence," << (report.used_subsequence ? 1 : 0) << "\n";
  if (!report.subsequence.empty()) {
    os << "# subsequence,";
    for (std::size_t i = 0; i < report.subsequence.size(); ++i)
      os << (i ? ";" : "") << report.subsequence[i];
    os << "\n";
  }
  if (!report.note.empty()) os << "# note," << report.note << "\n";
  os << "vertex,n,value\n";
  for (const auto& s : report.series) {
    const std::string name = model.format(s.vertex);
    for (std::size_t i = 0; i < report.grid.size() && i < s.values.size(); ++i)
      os << name << "," << report.grid[i] << "," << format_double(s.values[i]) << "\n";
  }
}

std::string verdict_json(const HypercyclicityVerdict& verdict, const TreeModel& model,
                         const std::string& operator_name) {
  json reports = json::array();
  for (const auto& r : verdict.reports) reports.push_back(decay_to_json(r, model));
  json out{{"operator", operator_name},
           {"outcome", to_string(verdict.outcome)},
           {"reason", to_string(verdict.reason)},
           {"statement", verdict.statement},
           {"evidence_graded", verdict.evidence_graded},
           {"note", verdict.note},
           {"reports", reports}};
  if (verdict.witness) out["witness"] = model.format(*verdict.witness);
  return out.dump(2);
}

std::string shadow_plan_json(const ShadowPlan& plan, const TreeModel& model) {
  json targets = json::array();
  for (const auto& g : plan.targets) targets.push_back(function_to_json(g, model));
  json schedule = json::array();
  for (auto n : plan.schedule) schedule.push_back(n);
  json budgets = json::array();
  for (double b : plan.budgets) budgets.push_back(b);
  json predicted = json::array();
  for (double b : plan.predicted) predicted.push_back(b);
  return json{{"q", plan.q},
              {"eps", plan.eps},
              {"schedule", schedule},
              {"budgets", budgets},
              {"predicted", predicted},
              {"targets", targets}}
      .dump(2);
}

void write_shadow_csv(std::ostream& os, const ShadowPlan& plan,
                      const std::vector<double>& errors, double norm) {
  os << "# q," << format_double(plan.q) << "\n";
  os << "# eps," << format_double(plan.eps) << "\n";
  os << "# norm," << format_double(norm) << "\n";
  os << "k,n_k,error\n";
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const std::uint32_t nk = (k < plan.schedule.size()) ? plan.schedule[k] : 0;
    os << (k + 1) << "," << nk << "," << format_double(errors[k]) << "\n";
  }
}

void write_matrix_csv(std::ostream& os, const TruncatedOperator& op, const TreeModel& model) {
  const char* kind = "forward";
  switch (op.kind) {
    case OperatorKind::Forward: kind = "forward"; break;
    case OperatorKind::Adjoint: kind = "adjoint"; break;
    case OperatorKind::Backward: kind = "backward"; break;
    case OperatorKind::RightInverse: kind = "right_inverse"; break;
  }
  os << "# kind," << kind << "\n";
  os << "# power," << op.power << "\n";
  os << "# p," << format_double(op.p) << "\n";
  os << "# dim," << op.dim << "\n";
  os << "# bottom_boundary," << (op.bottom_boundary ? 1 : 0) << "\n";
  os << "# top_boundary," << (op.top_boundary ? 1 : 0) << "\n";
  os << "# columns";
  for (const auto& v : op.vertices) os << ";" << model.format(v);
  os << "\n";
  for (std::size_t i = 0; i < op.dim; ++i) {
    os << model.format(op.vertices[i]);
    for (std::size_t j = 0; j < op.dim; ++j) os << "," << format_double(op.at(i, j));
    os << "\n";
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InputError("cannot read file: " + path);
  return buf.str();
}

}  // namespace treeshift
