#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treeshift/dynamics.hpp"
#include "treeshift/errors.hpp"
#include "treeshift/function.hpp"
#include "treeshift/io.hpp"
#include "treeshift/matrix_oracle.hpp"
#include "treeshift/numerics.hpp"
#include "treeshift/operators.hpp"
#include "treeshift/shadowing.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

namespace {

using namespace treeshift;

struct OutSink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path, std::ios::binary);
    if (!file) throw InputError("cannot open output file: " + path);
    os = &file;
  }
};

TreeModel load_model(const std::string& tree_path) {
  if (tree_path.empty()) throw InputError("--tree is required");
  return load_tree_spec_text(read_text_file(tree_path));
}

WeightMap load_weights(const std::string& weights_path, const TreeModel& model) {
  if (weights_path.empty()) return WeightMap::unit();
  return load_weight_spec_text(read_text_file(weights_path), model);
}

std::vector<VertexAddress> parse_probes(const std::string& csv, const TreeModel& model) {
  std::vector<VertexAddress> probes;
  if (csv.empty()) return probes;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) probes.push_back(model.resolve(item));
  }
  return probes;
}

std::string render_value(double v) {
  if (std::isfinite(v)) return format_double(v);
  return v > 0 ? "∞" : "-∞";  // unbounded quantities render as infinity
}

int cmd_validate(const std::string& tree_path, const std::string& out_path) {
  OutSink sink;
  sink.open(out_path);
  const ValidationReport report = validate_tree_spec_text(read_text_file(tree_path));
  std::ostringstream body;
  body << "{\n  \"valid\": " << (report.valid() ? "true" : "false") << ",\n  \"issues\": [";
  for (std::size_t i = 0; i < report.issues.size(); ++i) {
    const auto& issue = report.issues[i];
    body << (i ? "," : "") << "\n    {\"axiom\": \"" << issue.axiom << "\", \"witness\": [";
    for (std::size_t j = 0; j < issue.witness.size(); ++j)
      body << (j ? ", " : "") << "\"" << issue.witness[j] << "\"";
    body << "]}";
  }
  body << (report.issues.empty() ? "]" : "\n  ]") << "\n}\n";
  *sink.os << body.str();
  return report.valid() ? 0 : 1;
}

int cmd_norms(const std::string& tree_path, const std::string& weights_path, double p,
              std::optional<double> q_opt, std::uint32_t oracle_depth, int trials,
              std::uint64_t seed, const std::string& format, const std::string& out_path) {
  const TreeModel model = load_model(tree_path);
  const WeightMap lam = load_weights(weights_path, model);
  const double q = q_opt ? *q_opt : (p > 1.0 ? conjugate_exponent(p) : 1.0);

  const NormBound s_norm = shift_norm(lam, p, model);
  const NormBound b_raw = backward_bound(lam, q, model);
  const double b_bound = std::pow(b_raw.value, 1.0 / q);

  const DepthWindow full = model.window();
  DepthWindow sub{std::min(full.up, oracle_depth), std::min(full.down, oracle_depth)};
  const auto op_s = truncate_operator(OperatorKind::Forward, model, lam, sub, p);
  const auto op_b = truncate_operator(OperatorKind::Backward, model, lam, sub, q);

  struct Row {
    std::string quantity;
    double value;
    std::string method;
  };
  std::vector<Row> rows;
  rows.push_back({"shift_norm", s_norm.value, s_norm.exact ? "closed_form" : "window_sup"});
  rows.push_back({"backward_bound", b_bound, b_raw.exact ? "closed_form" : "window_sup"});
  if (p == 2.0) {
    const auto pi = estimate_norm_p2(op_s);
    rows.push_back({"oracle_sigma_forward", pi.sigma,
                    pi.converged ? "power_iteration" : "power_iteration_unconverged"});
    rows.push_back({"delta_forward", s_norm.value - pi.sigma, "agreement"});
  }
  rows.push_back(
      {"oracle_lower_forward", lower_bound_norm_p(op_s, trials, seed), "witness_max"});
  if (q == 2.0) {
    const auto pi = estimate_norm_p2(op_b);
    rows.push_back({"oracle_sigma_backward", pi.sigma,
                    pi.converged ? "power_iteration" : "power_iteration_unconverged"});
    rows.push_back({"delta_backward", b_bound - pi.sigma, "agreement"});
  }
  rows.push_back(
      {"oracle_lower_backward", lower_bound_norm_p(op_b, trials, seed), "witness_max"});

  OutSink sink;
  sink.open(out_path);
  if (format == "json") {
    std::ostringstream body;
    body << "{\n  \"p\": " << format_double(p) << ",\n  \"q\": " << format_double(q)
         << ",\n  \"rows\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      body << (i ? "," : "") << "\n    {\"quantity\": \"" << rows[i].quantity << "\", ";
      if (std::isfinite(rows[i].value))
        body << "\"value\": " << format_double(rows[i].value) << ", ";
      else
        body << "\"value\": \"" << render_value(rows[i].value) << "\", ";
      body << "\"method\": \"" << rows[i].method << "\"}";
    }
    body << "\n  ]\n}\n";
    *sink.os << body.str();
  } else {
    *sink.os << "# p," << format_double(p) << "\n# q," << format_double(q) << "\n";
    *sink.os << "quantity,value,method\n";
    for (const auto& r : rows)
      *sink.os << r.quantity << "," << render_value(r.value) << "," << r.method << "\n";
  }
  return 0;
}

int cmd_decide(const std::string& tree_path, const std::string& weights_path,
               const std::string& op, double q, const std::string& probes_csv,
               std::uint32_t nmax, const std::string& format, const std::string& out_path) {
  const TreeModel model = load_model(tree_path);
  OutSink sink;
  sink.open(out_path);
  HypercyclicityVerdict verdict;
  if (op == "forward") {
    verdict = decide_forward(model);
  } else if (op == "backward") {
    const WeightMap lam = load_weights(weights_path, model);
    verdict = decide_backward(model, lam, q, parse_probes(probes_csv, model), nmax);
  } else {
    throw InputError("--operator must be forward or backward");
  }
  if (format == "csv") {
    *sink.os << "# operator," << op << "\n";
    *sink.os << "# outcome," << to_string(verdict.outcome) << "\n";
    *sink.os << "# reason," << to_string(verdict.reason) << "\n";
    if (verdict.witness) *sink.os << "# witness," << model.format(*verdict.witness) << "\n";
    *sink.os << "# evidence_graded," << (verdict.evidence_graded ? 1 : 0) << "\n";
    if (!verdict.statement.empty()) *sink.os << "# statement," << verdict.statement << "\n";
    if (!verdict.note.empty()) *sink.os << "# note," << verdict.note << "\n";
    for (const auto& report : verdict.reports) write_decay_csv(*sink.os, report, model);
  } else {
    *sink.os << verdict_json(verdict, model, op) << "\n";
  }
  return 0;
}

int cmd_decay(const std::string& tree_path, const std::string& weights_path,
              const std::string& quantity, double q, const std::string& probes_csv,
              std::uint32_t nmax, const std::string& format, const std::string& out_path) {
  const TreeModel model = load_model(tree_path);
  const WeightMap lam = load_weights(weights_path, model);
  std::vector<VertexAddress> probes = parse_probes(probes_csv, model);
  if (probes.empty()) probes = default_probes(model);
  if (nmax < 2) throw InputError("--nmax must be at least 2");
  std::vector<std::uint32_t> grid;
  for (std::uint32_t n = 1; n <= nmax; ++n) grid.push_back(n);
  const DecayReport report =
      decay_report(model, lam, q, parse_decay_quantity(quantity), probes, grid);
  OutSink sink;
  sink.open(out_path);
  if (format == "json")
    *sink.os << decay_report_json(report, model) << "\n";
  else
    write_decay_csv(*sink.os, report, model);
  return 0;
}

int cmd_shadow(const std::string& tree_path, const std::string& weights_path, double q,
               double eps, const std::string& targets_path, std::uint32_t num_targets,
               std::uint32_t target_depth, std::uint64_t seed, const std::string& format,
               const std::string& out_path) {
  const TreeModel model = load_model(tree_path);
  const WeightMap lam = load_weights(weights_path, model);
  std::vector<TreeFunction> targets;
  if (!targets_path.empty()) {
    targets = load_function_list_text(read_text_file(targets_path), model);
  } else {
    if (num_targets == 0) throw InputError("--num-targets must be at least 1");
    for (std::uint32_t i = 0; i < num_targets; ++i)
      targets.push_back(random_tree_function(model, target_depth, 3, seed + i));
  }
  const ShadowPlan plan = plan_schedule(model, lam, q, eps, targets);
  const ShadowBuild build = build_shadow_vector(plan, model, lam);
  OutSink sink;
  sink.open(out_path);
  if (format == "json")
    *sink.os << shadow_plan_json(plan, model) << "\n";
  else
    write_shadow_csv(*sink.os, plan, build.errors, build.norm);
  return 0;
}

int cmd_equiv(const std::string& tree_path, const std::string& weights_path, double q,
              int samples, std::uint32_t depth, std::uint64_t seed, const std::string& format,
              const std::string& out_path) {
  const TreeModel model = load_model(tree_path);
  const WeightMap lam = load_weights(weights_path, model);
  if (samples < 1) throw InputError("--samples must be at least 1");
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const TreeFunction f =
        random_tree_function(model, depth, 5, seed + static_cast<std::uint64_t>(i));
    worst = std::max(worst, check_unitary_equivalence(f, lam, q, model));
  }
  OutSink sink;
  sink.open(out_path);
  if (format == "json")
    *sink.os << "{\"samples\": " << samples << ", \"max_residual\": " << format_double(worst)
             << "}\n";
  else
    *sink.os << "samples,max_residual\n" << samples << "," << format_double(worst) << "\n";
  return 0;
}

int cmd_oracle(const std::string& tree_path, const std::string& weights_path,
               const std::string& kind_text, std::uint32_t power, double p,
               std::optional<std::uint32_t> sub_up, std::optional<std::uint32_t> sub_down,
               int trials, std::uint64_t seed, const std::string& dump_path,
               const std::string& format, const std::string& out_path) {
  const TreeModel model = load_model(tree_path);
  const WeightMap lam = load_weights(weights_path, model);
  OperatorKind kind;
  if (kind_text == "forward")
    kind = OperatorKind::Forward;
  else if (kind_text == "adjoint")
    kind = OperatorKind::Adjoint;
  else if (kind_text == "backward")
    kind = OperatorKind::Backward;
  else if (kind_text == "right_inverse")
    kind = OperatorKind::RightInverse;
  else
    throw InputError("--kind must be forward, adjoint, backward, or right_inverse");
  const DepthWindow full = model.window();
  const DepthWindow sub{sub_up ? *sub_up : full.up, sub_down ? *sub_down : full.down};
  const auto op = truncate_operator(kind, model, lam, sub, p, power);
  if (!dump_path.empty()) {
    std::ofstream dump(dump_path, std::ios::binary);
    if (!dump) throw InputError("cannot open output file: " + dump_path);
    write_matrix_csv(dump, op, model);
  }
  const double lower = lower_bound_norm_p(op, trials, seed);
  OutSink sink;
  sink.open(out_path);
  if (p == 2.0) {
    const auto pi = estimate_norm_p2(op);
    if (format == "json")
      *sink.os << "{\"dim\": " << op.dim << ", \"sigma\": " << format_double(pi.sigma)
               << ", \"iterations\": " << pi.iterations
               << ", \"converged\": " << (pi.converged ? "true" : "false")
               << ", \"lower_bound\": " << format_double(lower)
               << ", \"bottom_boundary\": " << (op.bottom_boundary ? "true" : "false")
               << ", \"top_boundary\": " << (op.top_boundary ? "true" : "false") << "}\n";
    else
      *sink.os << "quantity,value\ndim," << op.dim << "\nsigma," << format_double(pi.sigma)
               << "\niterations," << pi.iterations << "\nconverged," << (pi.converged ? 1 : 0)
               << "\nlower_bound," << format_double(lower) << "\nbottom_boundary,"
               << (op.bottom_boundary ? 1 : 0) << "\ntop_boundary,"
               << (op.top_boundary ? 1 : 0) << "\n";
  } else {
    if (format == "json")
      *sink.os << "{\"dim\": " << op.dim << ", \"lower_bound\": " << format_double(lower)
               << ", \"bottom_boundary\": " << (op.bottom_boundary ? "true" : "false")
               << ", \"top_boundary\": " << (op.top_boundary ? "true" : "false") << "}\n";
    else
      *sink.os << "quantity,value\ndim," << op.dim << "\nlower_bound," << format_double(lower)
               << "\nbottom_boundary," << (op.bottom_boundary ? 1 : 0) << "\ntop_boundary,"
               << (op.top_boundary ? 1 : 0) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shift operators on weighted L^p spaces of directed trees"};
  app.require_subcommand(1);

  std::string tree_path, weights_path, out_path, format = "csv", probes_csv;
  double p = 2.0, q = 2.0, eps = 1e-3;
  std::optional<double> q_explicit;
  std::uint32_t nmax = 12, oracle_depth = 8, num_targets = 4, target_depth = 3, depth = 4,
                power = 1;
  std::optional<std::uint32_t> sub_up, sub_down;
  int trials = 20, samples = 100;
  std::uint64_t seed = 1;
  std::string op_name = "backward", quantity = "omega", kind_text = "forward", dump_path,
              targets_path;

  auto add_common = [&](CLI::App* sub, bool weights = true) {
    sub->add_option("--tree", tree_path, "tree spec JSON path")->required();
    if (weights) sub->add_option("--weights", weights_path, "weight spec JSON path");
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* validate = app.add_subcommand("validate", "check the directed-tree axioms of a spec");
  validate->add_option("--tree", tree_path, "tree spec JSON path")->required();
  validate->add_option("--out", out_path, "output path (default stdout)");

  auto* norms = app.add_subcommand("norms", "closed-form norms vs the matrix oracle");
  add_common(norms);
  norms->add_option("--p", p, "exponent of the S side (default 2)");
  norms->add_option("--q", q_explicit, "exponent of the B side (default conjugate of p)");
  norms->add_option("--oracle-depth", oracle_depth, "truncation depth for the oracle");
  norms->add_option("--trials", trials, "random witnesses for the lower bound");
  norms->add_option("--seed", seed, "random seed");

  auto* decide = app.add_subcommand("decide", "hypercyclicity verdict for S or B");
  add_common(decide);
  decide->add_option("--operator", op_name, "forward | backward");
  decide->add_option("--q", q, "space exponent for B (default 2)");
  decide->add_option("--probes", probes_csv, "comma-separated probe vertices");
  decide->add_option("--nmax", nmax, "largest power inspected (default 12)");

  auto* decay = app.add_subcommand("decay", "decay evidence table for Omega/Theta/...");
  add_common(decay);
  decay->add_option("--quantity", quantity, "omega | theta | omega_star | necessary_sum");
  decay->add_option("--q", q, "space exponent (default 2)");
  decay->add_option("--probes", probes_csv, "comma-separated probe vertices");
  decay->add_option("--nmax", nmax, "largest power in the grid (default 12)");

  auto* shadow = app.add_subcommand("shadow", "orbit-shadowing constructor");
  add_common(shadow);
  shadow->add_option("--q", q, "space exponent (default 2)");
  shadow->add_option("--eps", eps, "orbit error budget per stage (default 1e-3)");
  shadow->add_option("--targets", targets_path, "JSON array of target function documents");
  shadow->add_option("--num-targets", num_targets, "number of random targets (default 4)");
  shadow->add_option("--target-depth", target_depth, "support depth of the targets");
  shadow->add_option("--seed", seed, "random seed");

  auto* equiv = app.add_subcommand("equiv", "S* vs B intertwining residual");
  add_common(equiv);
  equiv->add_option("--q", q, "space exponent (default 2)");
  equiv->add_option("--samples", samples, "number of random functions (default 100)");
  equiv->add_option("--depth", depth, "support depth of the samples");
  equiv->add_option("--seed", seed, "random seed");

  auto* oracle = app.add_subcommand("oracle", "dense truncation: estimates and CSV dump");
  add_common(oracle);
  oracle->add_option("--kind", kind_text, "forward | adjoint | backward | right_inverse");
  oracle->add_option("--power", power, "the n of right_inverse (default 1)");
  oracle->add_option("--p", p, "space exponent (default 2)");
  oracle->add_option("--sub-up", sub_up, "sub-window ancestor depth");
  oracle->add_option("--sub-down", sub_down, "sub-window descent depth");
  oracle->add_option("--trials", trials, "random witnesses for the lower bound");
  oracle->add_option("--seed", seed, "random seed");
  oracle->add_option("--dump", dump_path, "write the dense matrix as CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(tree_path, out_path);
    if (app.got_subcommand(norms))
      return cmd_norms(tree_path, weights_path, p, q_explicit, oracle_depth, trials, seed,
                       format, out_path);
    if (app.got_subcommand(decide))
      return cmd_decide(tree_path, weights_path, op_name, q, probes_csv, nmax, format,
                        out_path);
    if (app.got_subcommand(decay))
      return cmd_decay(tree_path, weights_path, quantity, q, probes_csv, nmax, format,
                       out_path);
    if (app.got_subcommand(shadow))
      return cmd_shadow(tree_path, weights_path, q, eps, targets_path, num_targets,
                        target_depth, seed, format, out_path);
    if (app.got_subcommand(equiv))
      return cmd_equiv(tree_path, weights_path, q, samples, depth, seed, format, out_path);
    if (app.got_subcommand(oracle))
      return cmd_oracle(tree_path, weights_path, kind_text, power, p, sub_up, sub_down, trials,
                        seed, dump_path, format, out_path);
    std::cerr << "input error: no subcommand selected\n";
    return 2;
  } catch (const WindowExhausted& e) {
    std::cerr << "window exhausted: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
