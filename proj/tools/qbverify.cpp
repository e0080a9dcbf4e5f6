// qbverify: runs verification experiments and prints reports.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qb/bergman.hpp"
#include "qb/group_action.hpp"
#include "qb/quotient.hpp"
#include "qb/smith.hpp"
#include "qb/verify.hpp"

using json = nlohmann::json;

namespace {

struct ExperimentFlags {
  std::string config;
  std::string name;
  std::string group;
  std::vector<double> alpha;
  int truncation = -1;
  int radial = 0;
  int angular = 0;
  std::string character;
  std::string expect;
  std::string points;
  std::vector<std::string> tolerances;
  std::int64_t seed = -1;
  int samples = 0;
  std::map<std::string, std::string> symbols;
  std::string format = "json";
  std::string output;
};

void add_common(CLI::App* cmd, ExperimentFlags& f, bool with_group = true) {
  cmd->add_option("--config", f.config, "JSON experiment file; flags override its keys");
  cmd->add_option("--name", f.name, "Experiment name in the report");
  if (with_group) {
    cmd->add_option("--group", f.group, "S2, S3, Z3, Z2xZ3, ...");
    cmd->add_option("--character", f.character, "One-dimensional character label");
  }
  cmd->add_option("--alpha", f.alpha, "Weight exponents")->delimiter(',');
  cmd->add_option("-N,--truncation", f.truncation, "Truncation degree per variable");
  cmd->add_option("--radial-order", f.radial, "Radial quadrature order");
  cmd->add_option("--angular-order", f.angular, "Angular quadrature order");
  cmd->add_option("--expect", f.expect, "pass or fail")->check(CLI::IsMember({"pass", "fail"}));
  cmd->add_option("--points", f.points, "Evaluation points as JSON, e.g. '[[[0.3,0.2]]]'");
  cmd->add_option("--tol", f.tolerances, "Tolerance override name=value");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--samples", f.samples, "Number of random samples");
  cmd->add_option("--format", f.format, "json, csv or md")->check(CLI::IsMember({"json", "csv", "md"}));
  cmd->add_option("-o,--output", f.output, "Report path (stdout if omitted)");
}

void add_symbol(CLI::App* cmd, ExperimentFlags& f, const std::string& role, const std::string& help) {
  cmd->add_option_function<std::string>("--" + role, [&f, role](const std::string& s) { f.symbols[role] = s; }, help);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qb::Error(qb::ErrorCode::io, "cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw qb::Error(qb::ErrorCode::usage, "'" + path + "' is not valid JSON: " + e.what());
  }
}

qb::ExperimentConfig build_config(const ExperimentFlags& f, const std::string& kind) {
  json j = f.config.empty() ? json::object() : read_json_file(f.config);
  if (j.contains("experiments")) throw qb::Error(qb::ErrorCode::usage, "use 'report' for batch configs");
  j["kind"] = kind;
  if (!f.name.empty()) j["name"] = f.name;
  if (!f.group.empty()) j["group"] = f.group;
  if (!f.character.empty()) j["character"] = f.character;
  if (!f.alpha.empty()) j["alpha"] = f.alpha;
  if (f.truncation >= 0) j["N"] = f.truncation;
  if (f.radial > 0 || f.angular > 0) {
    json o = j.value("orders", json::object());
    if (f.radial > 0) o["radial"] = f.radial;
    if (f.angular > 0) o["angular"] = f.angular;
    j["orders"] = o;
  }
  if (!f.expect.empty()) j["expect"] = f.expect;
  if (!f.points.empty()) {
    try {
      j["points"] = json::parse(f.points);
    } catch (const json::exception&) {
      throw qb::Error(qb::ErrorCode::usage, "--points must be JSON");
    }
  }
  for (const auto& t : f.tolerances) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw qb::Error(qb::ErrorCode::usage, "--tol expects name=value");
    j["tolerances"][t.substr(0, eq)] = std::stod(t.substr(eq + 1));
  }
  if (f.seed >= 0) j["seed"] = f.seed;
  if (f.samples > 0) j["samples"] = f.samples;
  for (const auto& [role, text] : f.symbols) j["symbols"][role] = text;
  return qb::ExperimentConfig::from_json(j);
}

int run_and_emit(const std::vector<qb::ExperimentConfig>& cfgs, const std::string& format, const std::string& output) {
  const auto reports = qb::run_batch(cfgs);
  std::string path = output;
  if (path.empty() && cfgs.size() == 1) path = cfgs.front().output;
  qb::emit_report(reports, qb::report_format_from_string(format), path);
  return qb::exit_code(reports);
}

json group_summary(const qb::ReflectionGroup& g) {
  json j;
  j["label"] = g.label();
  j["order"] = g.order();
  j["dimension"] = g.dimension();
  j["basic_degrees"] = qb::basic_degrees(g);
  json theta = json::array();
  for (const auto& c : qb::basic_map(g).components) theta.push_back(c.to_string());
  j["basic_map"] = theta;
  j["jacobian"] = qb::jacobian_det(qb::basic_map(g)).to_string();
  json hs = json::array();
  for (const auto& h : g.hyperplanes()) hs.push_back({{"form", h.as_polynomial().to_string()}, {"order", h.cyclic_order}});
  j["hyperplanes"] = hs;
  json chars = json::array();
  for (const auto& chi : qb::one_dim_characters(g))
    chars.push_back({{"label", chi.label},
                     {"exponents", chi.exponents},
                     {"generating_polynomial", qb::generating_polynomial(g, chi).to_string()}});
  j["characters"] = chars;
  return j;
}

qb::IntMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<long long>> rows;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), '/', ';');
  std::stringstream rs(normalized);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<long long> r;
    std::stringstream cs(row);
    std::string cell;
    while (std::getline(cs, cell, ',')) r.push_back(std::stoll(cell));
    rows.push_back(r);
  }
  if (rows.empty()) throw qb::Error(qb::ErrorCode::usage, "empty matrix");
  qb::IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw qb::Error(qb::ErrorCode::usage, "ragged matrix");
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return m;
}

json matrix_json(const qb::IntMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    out.push_back(r);
  }
  return out;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw qb::Error(qb::ErrorCode::io, "cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification driver for Toeplitz operators on quotient domains"};
  app.require_subcommand(1);

  // groups show
  auto* groups = app.add_subcommand("groups", "Reflection group information");
  auto* show = groups->add_subcommand("show", "Print hyperplanes, characters and the basic map");
  groups->require_subcommand(1);
  std::string show_group = "S2";
  show->add_option("--group", show_group, "S2, S3, Z3, Z2xZ3, ...");

  // toeplitz dump
  auto* toeplitz = app.add_subcommand("toeplitz", "Truncated Toeplitz matrices");
  toeplitz->require_subcommand(1);
  auto* dump = toeplitz->add_subcommand("dump", "Write the truncated matrix of a symbol");
  std::string dump_symbol, dump_group, dump_character, dump_format = "csv", dump_output;
  std::vector<double> dump_alpha;
  int dump_n = 4;
  dump->add_option("--symbol", dump_symbol, "Symbol, e.g. 'z1*zb2 + 1'")->required();
  dump->add_option("--alpha", dump_alpha, "Weight exponents")->delimiter(',');
  dump->add_option("-N,--truncation", dump_n, "Truncation degree");
  dump->add_option("--group", dump_group, "With --character: compress to an isotypic component");
  dump->add_option("--character", dump_character, "Character label; the symbol is in quotient variables");
  dump->add_option("--format", dump_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  dump->add_option("-o,--output", dump_output, "Output path");

  // snf
  auto* snf = app.add_subcommand("snf", "Smith normal form");
  ExperimentFlags snf_flags;
  std::string snf_matrix;
  snf->add_option("--matrix", snf_matrix, "Rows separated by ';' or '/', entries by ','");
  add_common(snf, snf_flags, false);

  // report
  auto* report = app.add_subcommand("report", "Run a batch config and emit a combined report");
  std::string report_config, report_format = "md", report_output;
  report->add_option("--config", report_config, "JSON config")->required();
  report->add_option("--format", report_format, "json, csv or md")->check(CLI::IsMember({"json", "csv", "md"}));
  report->add_option("-o,--output", report_output, "Report path");

  // experiment subcommands
  struct Experiment {
    std::string command;
    std::string kind;
    CLI::App* app;
    ExperimentFlags flags;
  };
  std::vector<std::unique_ptr<Experiment>> experiments;
  auto experiment = [&](const std::string& command, const std::string& kind, const std::string& help,
                        bool with_group) -> Experiment& {
    auto e = std::make_unique<Experiment>();
    e->command = command;
    e->kind = kind;
    e->app = app.add_subcommand(command, help);
    add_common(e->app, e->flags, with_group);
    experiments.push_back(std::move(e));
    return *experiments.back();
  };

  auto& decompose = experiment("decompose", "decompose", "Isotypic projection checks", true);
  (void)decompose;
  auto& transfer = experiment("transfer", "transfer-product", "T_u T_v = T_q across isotypic components", true);
  add_symbol(transfer.app, transfer.flags, "u", "Symbol u in quotient variables");
  add_symbol(transfer.app, transfer.flags, "v", "Symbol v in quotient variables");
  add_symbol(transfer.app, transfer.flags, "q", "Symbol q (default u*v)");
  auto& commute = experiment("commute", "transfer-commutator", "T_u T_v = T_v T_u across isotypic components", true);
  add_symbol(commute.app, commute.flags, "u", "Symbol u in quotient variables");
  add_symbol(commute.app, commute.flags, "v", "Symbol v in quotient variables");
  auto& lemma = experiment("lemma-pr", "lemma-pr", "Operator-side and Berezin-side product indicators", false);
  add_symbol(lemma.app, lemma.flags, "f", "Harmonic symbol f");
  add_symbol(lemma.app, lemma.flags, "g", "Harmonic symbol g");
  lemma.app->set_help_flag("--help", "Print this help message and exit");
  add_symbol(lemma.app, lemma.flags, "h", "Symbol h");
  auto& kernel = experiment("kernel-check", "kernel-check", "Reproducing property of the weighted kernel", false);
  add_symbol(kernel.app, kernel.flags, "p", "Holomorphic polynomial (random if omitted)");
  auto& berezin = experiment("berezin", "berezin", "Berezin transform fixed points", false);
  add_symbol(berezin.app, berezin.flags, "f", "Symbol f");
  auto& run = experiment("run", "", "Run any experiment kind from --config", true);
  std::string run_kind;
  run.app->add_option("--kind", run_kind, "Experiment kind (overrides the config)");
  add_symbol(run.app, run.flags, "u", "Symbol u");
  add_symbol(run.app, run.flags, "v", "Symbol v");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (show->parsed()) {
      std::cout << group_summary(qb::group_from_spec(show_group)).dump(2) << "\n";
      return 0;
    }
    if (dump->parsed()) {
      qb::TruncatedOperator op;
      if (!dump_character.empty()) {
        const auto g = qb::group_from_spec(dump_group.empty() ? "S2" : dump_group);
        std::vector<double> a = dump_alpha.empty() ? std::vector<double>(g.dimension(), 0.0) : dump_alpha;
        const auto q = qb::QuotientDescriptor::make(g, qb::character_by_label(g, dump_character), qb::Weight::polydisc(a));
        const auto u = qb::compose_map(qb::parse_symbol(dump_symbol, g.dimension()), q.theta);
        op = qb::compressed_toeplitz(q, qb::isotypic_basis(q, dump_n), u);
      } else {
        std::vector<double> a = dump_alpha.empty() ? std::vector<double>{0.0} : dump_alpha;
        op = qb::toeplitz_matrix(qb::parse_symbol(dump_symbol, a.size()), qb::Weight::polydisc(a), dump_n);
      }
      write_text(dump_format == "csv" ? op.to_csv() : op.to_json().dump(2) + "\n", dump_output);
      return 0;
    }
    if (snf->parsed()) {
      if (!snf_matrix.empty()) {
        const auto s = qb::smith_normal_form(parse_matrix(snf_matrix));
        json j{{"P", matrix_json(s.P)}, {"D", matrix_json(s.D)}, {"Q", matrix_json(s.Q)}};
        write_text(j.dump(2) + "\n", snf_flags.output);
        return 0;
      }
      return run_and_emit({build_config(snf_flags, "snf")}, snf_flags.format, snf_flags.output);
    }
    if (report->parsed()) return run_and_emit(qb::load_config(report_config), report_format, report_output);
    for (auto& e : experiments) {
      if (!e->app->parsed()) continue;
      std::string kind = e->kind;
      if (kind.empty()) {
        kind = run_kind;
        if (kind.empty() && !e->flags.config.empty()) kind = read_json_file(e->flags.config).value("kind", "");
        if (kind.empty()) throw qb::Error(qb::ErrorCode::usage, "run needs --kind or a config with a kind");
      }
      return run_and_emit({build_config(e->flags, kind)}, e->flags.format, e->flags.output);
    }
  } catch (const qb::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == qb::ErrorCode::internal ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
