#include "slackcert/cli.hpp"

#include "slackcert/certificate_io.hpp"
#include "slackcert/error.hpp"
#include "slackcert/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace slackcert {

using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

void validate(const RunConfig& config) {
  if (config.k < 1) throw InvalidInput("k must be at least 1");
  if (config.l < 1) throw InvalidInput("l must be at least 1");
  if (config.time_limit && !(*config.time_limit > 0)) throw InvalidInput("time limit must be positive");
  validate(config.heuristics);
}

namespace {

const char* subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::Certify:
      return "certify";
    case Subcommand::Parametrize:
      return "parametrize";
    case Subcommand::Orient:
      return "orient";
    case Subcommand::Verify:
      return "verify";
    case Subcommand::CheckFinal:
      return "check-final";
    case Subcommand::Batch:
      break;
  }
  return "batch";
}

ojson one_based(const std::vector<std::uint32_t>& v) {
  ojson out = ojson::array();
  for (auto x : v) out.push_back(x + 1);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Stage bookkeeping shared by every subcommand.
class Pipeline {
 public:
  explicit Pipeline(const RunConfig& config) : config_(config), start_(Clock::now()) {
    if (config.time_limit) {
      deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*config.time_limit));
    }
  }

  void enter(const std::string& stage) {
    finish_stage();
    if (deadline_ && Clock::now() > *deadline_) {
      throw TimeLimitExceeded("time limit reached before stage '" + stage + "'");
    }
    stage_ = stage;
    stage_start_ = Clock::now();
  }

  void finish_stage() {
    if (!stage_.empty()) {
      timings_[stage_] = std::chrono::duration<double>(Clock::now() - stage_start_).count();
    }
  }

  const std::string& stage() const { return stage_; }
  const Deadline& deadline() const { return deadline_; }
  const ojson& timings() const { return timings_; }

 private:
  const RunConfig& config_;
  Clock::time_point start_;
  Clock::time_point stage_start_;
  Deadline deadline_;
  std::string stage_;
  ojson timings_ = ojson::object();
};

void merge_overrides(ModelOptions& options, const RunConfig& config, const AbstractSphere& sphere) {
  const auto m = sphere.num_facets();
  const auto n = sphere.num_vertices;
  auto check_facet = [&](std::uint32_t j) {
    if (j >= m) throw InvalidInput("facet " + std::to_string(j + 1) + " out of range 1.." + std::to_string(m));
  };
  auto check_vertex = [&](std::uint32_t v) {
    if (v >= n) throw InvalidInput("vertex " + std::to_string(v + 1) + " out of range 1.." + std::to_string(n));
  };
  if (config.flag) {
    for (auto j : *config.flag) check_facet(j);
    if (config.flag->size() != sphere.dimension + 1) {
      throw InvalidInput("--flag needs exactly " + std::to_string(sphere.dimension + 1) + " facets");
    }
    options.flag = config.flag;
  }
  for (const auto& [j, basis] : config.bases) {
    check_facet(j);
    if (basis.size() != sphere.dimension) {
      throw InvalidInput("--basis for facet " + std::to_string(j + 1) + " needs " + std::to_string(sphere.dimension) +
                         " vertices");
    }
    for (auto v : basis) {
      check_vertex(v);
      if (!sphere.contains(j, v)) {
        throw InvalidInput("--basis vertex " + std::to_string(v + 1) + " is not on facet " + std::to_string(j + 1));
      }
    }
    options.bases[j] = basis;
  }
  for (const auto& [j, sign] : config.orientation) {
    check_facet(j);
    options.orientation[j] = sign;
  }
  for (auto v : config.heuristics.avoid) check_vertex(v);
  for (auto v : config.heuristics.fix) check_vertex(v);
  options.redundant_bases = config.heuristics.redundant_bases;
}

ojson sphere_summary(const SphereFile& file) {
  ojson s = ojson::object();
  s["name"] = file.name;
  s["dimension"] = file.sphere.dimension;
  s["vertices"] = file.sphere.num_vertices;
  s["facets"] = file.sphere.num_facets();
  s["simplicial"] = file.sphere.all_simplicial();
  s["partial"] = file.overrides.partial;
  return s;
}

ojson model_summary(const SlackModel& model) {
  ojson s = ojson::object();
  s["flag"] = one_based(model.flag);
  s["columns"] = model.matrix.cols();
  s["variables"] = model.reduced.count(Cell::Var);
  s["fixed_entries"] = model.reduced.count(Cell::One);
  return s;
}

ojson matrices_json(const SlackModel& model) {
  ojson out = ojson::object();
  out["reduced_homogeneous"] = lines_of(render_reduced(model.homogeneous_reduced));
  out["reduced"] = lines_of(render_reduced(model.reduced));
  ojson fixed = ojson::array();
  for (const auto& [i, c] : model.ledger.fixed) fixed.push_back(ojson::array({i + 1, c + 1}));
  out["fixed"] = fixed;
  ojson rows = ojson::array();
  for (const auto& r : model.ledger.row_scale) rows.push_back(to_string(r));
  ojson cols = ojson::array();
  for (const auto& c : model.ledger.col_scale) cols.push_back(to_string(c));
  out["row_scale"] = rows;
  out["col_scale"] = cols;
  ojson columns = ojson::array();
  for (std::uint32_t j = 0; j < model.matrix.cols(); ++j) {
    const auto& col = model.matrix.columns[j];
    ojson c = ojson::object();
    c["column"] = j + 1;
    c["facet"] = col.facet + 1;
    c["basis"] = one_based(col.basis);
    c["redundant"] = col.redundant;
    c["sign"] = model.matrix.signs[j];
    ojson entries = ojson::array();
    for (std::uint32_t i = 0; i < model.matrix.rows; ++i) {
      entries.push_back(model.matrix.incident(i, j) ? std::string("0") : to_string(model.matrix.entry(i, j)));
    }
    c["entries"] = entries;
    columns.push_back(c);
  }
  out["parametrized"] = columns;
  return out;
}

ojson orientation_json(const SlackModel& model) {
  ojson out = ojson::array();
  for (std::uint32_t j = 0; j < model.matrix.cols(); ++j) {
    const auto& col = model.matrix.columns[j];
    ojson c = ojson::object();
    c["column"] = j + 1;
    c["facet"] = col.facet + 1;
    c["basis"] = one_based(col.basis);
    c["redundant"] = col.redundant;
    c["sign"] = model.matrix.signs[j];
    out.push_back(c);
  }
  return out;
}

SlackModel load_model(const RunConfig& config, const SphereFile& file) {
  ModelOptions options = model_options(file.overrides);
  merge_overrides(options, config, file.sphere);
  return build_slack_model(file.sphere, options);
}

void add_pseudomanifold(ojson& data, const SphereFile& file) {
  if (file.overrides.partial) return;
  auto report = validate_pseudomanifold(file.sphere);
  ojson p = ojson::object();
  p["ok"] = report.ok();
  p["ridges_checked"] = report.ridges_checked;
  p["bad_ridges"] = report.bad_ridges.size();
  p["connected"] = report.connected;
  data["pseudomanifold"] = p;
}

// Rehomogenization, translation and the numeric Grassmannian check.
void finish_certificate(Certificate& cert, const SlackModel& model, std::size_t trials, ojson& data) {
  rehomogenize(cert, model);
  to_final_polynomial(cert, model);
  if (cert.final_polynomial) {
    ojson check = ojson::object();
    check["trials"] = trials;
    check["passed"] = grassmann_numeric_check(*cert.final_polynomial, trials);
    data["grassmann_check"] = check;
    data["final_polynomial_text"] = to_string(*cert.final_polynomial);
  }
}

ojson certificate_text(const Certificate& cert) {
  ojson out = ojson::array();
  for (const auto& t : cert.terms) {
    std::string line = to_string(t.weight);
    for (const auto& f : t.factors) line += " * " + to_string(f);
    out.push_back(line);
  }
  return out;
}

void run_certify(const RunConfig& config, Pipeline& pipe, ojson& data, int& exit_code) {
  pipe.enter("parse");
  SphereFile file = load_sphere(config.input);
  data["sphere"] = sphere_summary(file);
  add_pseudomanifold(data, file);
  pipe.enter("parametrize");
  SlackModel model = load_model(config, file);
  data["model"] = model_summary(model);
  data["warnings"] = model.warnings;
  if (config.dump_matrices) data["matrices"] = matrices_json(model);

  pipe.enter("search");
  std::ofstream tableau;
  LpOptions lp;
  lp.deadline = pipe.deadline();
  if (!config.dump_tableau.empty()) {
    tableau.open(config.dump_tableau);
    if (!tableau) throw InvalidInput("cannot write " + config.dump_tableau);
    lp.dump = &tableau;
  }
  SearchResult result = search_certificate(model.matrix, model.reduced.variables(), config.k, config.l,
                                           config.heuristics, lp);
  ojson pool = ojson::object();
  pool["entry_constraints"] = result.stats.entry_constraints;
  pool["variable_constraints"] = result.stats.variable_constraints;
  pool["products"] = result.stats.products;
  pool["monomial_rows"] = result.stats.monomial_rows;
  data["pool"] = pool;
  ojson lp_json = ojson::object();
  lp_json["status"] = result.certificate ? "certificate" : "none";
  lp_json["active_rows"] = result.stats.active_rows;
  lp_json["active_columns"] = result.stats.active_cols;
  lp_json["pivots"] = result.stats.pivots;
  data["lp"] = lp_json;

  if (!result.certificate) {
    data["status"] = "none";
    data["note"] = "no (k,l)-positive polynomial exists in this pool; this does not show realizability";
    data["certificate"] = nullptr;
    exit_code = kExitNoCertificate;
    return;
  }
  pipe.enter("rehomogenize");
  Certificate& cert = *result.certificate;
  data["status"] = "certificate";
  data["certificate_text"] = certificate_text(cert);
  finish_certificate(cert, model, config.trials, data);
  data["certificate"] = certificate_to_json(cert);
  if (!config.out.empty()) {
    std::ofstream out(config.out);
    if (!out) throw InvalidInput("cannot write " + config.out);
    out << certificate_to_json(cert).dump(2) << "\n";
  }
  exit_code = kExitOk;
}

void run_parametrize(const RunConfig& config, Pipeline& pipe, ojson& data, bool orient_only) {
  pipe.enter("parse");
  SphereFile file = load_sphere(config.input);
  data["sphere"] = sphere_summary(file);
  add_pseudomanifold(data, file);
  pipe.enter(orient_only ? "orient" : "parametrize");
  SlackModel model = load_model(config, file);
  data["model"] = model_summary(model);
  data["warnings"] = model.warnings;
  if (orient_only) {
    data["orientation"] = orientation_json(model);
  } else {
    data["matrices"] = matrices_json(model);
  }
  data["status"] = "ok";
}

void run_verify(const RunConfig& config, Pipeline& pipe, ojson& data, int& exit_code) {
  pipe.enter("parse");
  if (config.against.empty()) throw InvalidInput("verify needs --against SPHERE");
  Certificate cert = load_certificate(config.input);
  SphereFile file = load_sphere(config.against);
  data["sphere"] = sphere_summary(file);
  pipe.enter("parametrize");
  RunConfig effective = config;
  effective.heuristics.redundant_bases = config.heuristics.redundant_bases || cert.heuristics.redundant_bases;
  SlackModel model = load_model(effective, file);
  data["model"] = model_summary(model);
  data["warnings"] = model.warnings;
  for (const auto& t : cert.terms) {
    for (const auto& f : t.factors) {
      bool entry = f.kind != FactorKind::Variable;
      std::size_t cols = entry ? model.matrix.cols() : model.reduced.cols();
      if (f.row >= model.matrix.rows || f.col >= cols) {
        throw InvalidInput("certificate factor " + to_string(f) + " is outside the matrix");
      }
    }
  }
  pipe.enter("verify");
  Polynomial residual = verify_certificate(cert, model.matrix);
  data["certificate_text"] = certificate_text(cert);
  data["verified"] = cert.verified;
  data["residual"] = to_string(residual);
  if (!cert.verified) {
    data["status"] = "invalid";
    exit_code = kExitNoCertificate;
    return;
  }
  pipe.enter("rehomogenize");
  finish_certificate(cert, model, config.trials, data);
  data["certificate"] = certificate_to_json(cert);
  data["status"] = "verified";
  exit_code = kExitOk;
}

void run_check_final(const RunConfig& config, Pipeline& pipe, ojson& data, int& exit_code) {
  pipe.enter("parse");
  std::ifstream in(config.input);
  if (!in) throw InvalidInput("cannot read " + config.input);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  // Accept a certify/verify report as well as a bare certificate.
  if (!doc.contains("final_polynomial") && doc.contains("certificate") && doc["certificate"].is_object()) {
    doc = nlohmann::json(doc["certificate"]);
  }
  FinalPolynomial fp = final_polynomial_from_json(doc);
  pipe.enter("check");
  bool passed = grassmann_numeric_check(fp, config.trials);
  data["final_polynomial_text"] = to_string(fp);
  data["trials"] = config.trials;
  data["passed"] = passed;
  data["status"] = passed ? "passed" : "failed";
  exit_code = passed ? kExitOk : kExitNoCertificate;
}

}  // namespace

Report run(const RunConfig& config) {
  Report report;
  auto& data = report.data;
  data["schema"] = "slackcert-report/1";
  data["subcommand"] = subcommand_name(config.subcommand);
  data["input"] = config.input;
  if (config.subcommand == Subcommand::Certify) {
    data["k"] = config.k;
    data["l"] = config.l;
    data["heuristics"] = heuristics_to_json(config.heuristics);
  }
  Pipeline pipe(config);
  try {
    pipe.enter("validate");
    validate(config);
    switch (config.subcommand) {
      case Subcommand::Certify:
        run_certify(config, pipe, data, report.exit_code);
        break;
      case Subcommand::Parametrize:
        run_parametrize(config, pipe, data, false);
        break;
      case Subcommand::Orient:
        run_parametrize(config, pipe, data, true);
        break;
      case Subcommand::Verify:
        run_verify(config, pipe, data, report.exit_code);
        break;
      case Subcommand::CheckFinal:
        run_check_final(config, pipe, data, report.exit_code);
        break;
      case Subcommand::Batch:
        return batch(config);
    }
  } catch (const Error& e) {
    int code = kExitInternal;
    std::string kind = "internal";
    if (dynamic_cast<const InvalidInput*>(&e) != nullptr) {
      code = kExitInvalidInput;
      kind = "invalid_input";
    } else if (dynamic_cast<const SearchFailed*>(&e) != nullptr) {
      code = kExitInvalidInput;
      kind = "search_failed";
    } else if (dynamic_cast<const TimeLimitExceeded*>(&e) != nullptr) {
      code = kExitTimeLimit;
      kind = "time_limit";
    }
    report.exit_code = code;
    data["status"] = "error";
    data["error"] = ojson{{"kind", kind}, {"stage", pipe.stage()}, {"message", e.what()}};
  } catch (const std::exception& e) {
    report.exit_code = kExitInternal;
    data["status"] = "error";
    data["error"] = ojson{{"kind", "internal"}, {"stage", pipe.stage()}, {"message", e.what()}};
  }
  pipe.finish_stage();
  data["exit_code"] = report.exit_code;
  if (config.timings) data["timings"] = pipe.timings();
  return report;
}

Report batch(const RunConfig& config) {
  namespace fs = std::filesystem;
  Report report;
  auto& data = report.data;
  data["schema"] = "slackcert-report/1";
  data["subcommand"] = "batch";
  data["input"] = config.input;
  try {
    if (config.grid.empty()) throw InvalidInput("empty grid");
    if (!fs::is_directory(config.input)) throw InvalidInput(config.input + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config.input)) {
      auto name = entry.path().filename().string();
      if (entry.is_regular_file() && entry.path().extension() == ".json" &&
          name.find(".report.json") == std::string::npos) {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InvalidInput("no sphere files in " + config.input);

    std::vector<ojson> rows(files.size());
    std::vector<ojson> errors(files.size());
    parallel_for(files.size(), [&](std::size_t f) {
      ojson row = ojson::object();
      row["name"] = files[f].stem().string();
      Report last;
      for (const auto& [k, l] : config.grid) {
        RunConfig cell = config;
        cell.subcommand = Subcommand::Certify;
        cell.input = files[f].string();
        cell.k = k;
        cell.l = l;
        cell.out.clear();
        cell.dump_tableau.clear();
        last = run(cell);
        if (last.exit_code != kExitNoCertificate) break;
      }
      if (last.exit_code == kExitOk) {
        row["found"] = std::to_string(last.data["k"].get<int>()) + "," + std::to_string(last.data["l"].get<int>());
        row["terms"] = last.data["certificate"]["terms"].size();
      } else if (last.exit_code == kExitNoCertificate) {
        row["found"] = nullptr;
        row["terms"] = nullptr;
      } else {
        errors[f] = ojson{{"name", row["name"]}, {"message", last.data["error"]["message"]}};
        return;
      }
      rows[f] = row;
      fs::path artifact = files[f];
      artifact.replace_extension(".report.json");
      std::ofstream out(artifact);
      if (out) out << last.data.dump(2) << "\n";
    });

    ojson results = ojson::array();
    ojson failures = ojson::array();
    ojson table = ojson::array();
    table.push_back("name | (k,l) | # terms");
    for (std::size_t f = 0; f < files.size(); ++f) {
      if (!errors[f].is_null()) {
        failures.push_back(errors[f]);
        continue;
      }
      results.push_back(rows[f]);
      std::string found = rows[f]["found"].is_null() ? "-" : "(" + rows[f]["found"].get<std::string>() + ")";
      std::string terms = rows[f]["terms"].is_null() ? "-" : std::to_string(rows[f]["terms"].get<std::size_t>());
      table.push_back(rows[f]["name"].get<std::string>() + " | " + found + " | " + terms);
    }
    ojson grid = ojson::array();
    for (const auto& [k, l] : config.grid) grid.push_back(ojson::array({k, l}));
    data["grid"] = grid;
    data["heuristics"] = heuristics_to_json(config.heuristics);
    data["table"] = table;
    data["results"] = results;
    data["errors"] = failures;
    data["status"] = "ok";
  } catch (const Error& e) {
    report.exit_code = kExitInvalidInput;
    data["status"] = "error";
    data["error"] = ojson{{"kind", "invalid_input"}, {"stage", "batch"}, {"message", e.what()}};
  }
  data["exit_code"] = report.exit_code;
  return report;
}

// ---------------------------------------------------------------- rendering

namespace {

bool is_scalar(const ojson& v) { return !v.is_object() && !v.is_array(); }

std::string scalar_text(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

void render_text(std::ostream& out, const std::string& key, const ojson& value, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  if (value.is_object()) {
    out << pad << key << ":\n";
    for (const auto& [k, v] : value.items()) render_text(out, k, v, indent + 2);
    return;
  }
  if (value.is_array()) {
    bool strings = !value.empty() && std::all_of(value.begin(), value.end(), [](const ojson& v) { return v.is_string(); });
    bool scalars = std::all_of(value.begin(), value.end(), is_scalar);
    if (strings) {
      out << pad << key << ":\n";
      for (const auto& v : value) out << pad << "  " << v.get<std::string>() << "\n";
    } else if (scalars || std::none_of(value.begin(), value.end(), [](const ojson& v) { return v.is_object(); })) {
      out << pad << key << ": " << value.dump() << "\n";
    } else {
      out << pad << key << ":\n";
      for (const auto& v : value) {
        if (v.is_object()) {
          out << pad << "  -\n";
          for (const auto& [k, inner] : v.items()) render_text(out, k, inner, indent + 4);
        } else {
          out << pad << "  - " << v.dump() << "\n";
        }
      }
    }
    return;
  }
  out << pad << key << ": " << scalar_text(value) << "\n";
}

}  // namespace

std::string render(const Report& report, OutputFormat format) {
  if (format == OutputFormat::Json) return report.data.dump(2) + "\n";
  std::ostringstream out;
  for (const auto& [k, v] : report.data.items()) render_text(out, k, v, 0);
  return out.str();
}

// ------------------------------------------------------------ command line

namespace {

std::vector<std::uint32_t> parse_labels(const std::string& text, const char* what) {
  std::vector<std::uint32_t> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || v < 1) throw InvalidInput(std::string("bad ") + what + " '" + item + "'");
    out.push_back(static_cast<std::uint32_t>(v - 1));
  }
  return out;
}

std::pair<std::uint32_t, std::string> split_keyed(const std::string& text, const char* what) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidInput(std::string(what) + " must look like j:...");
  auto key = parse_labels(text.substr(0, colon), what);
  if (key.size() != 1) throw InvalidInput(std::string("bad ") + what + " '" + text + "'");
  return {key[0], text.substr(colon + 1)};
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certify non-realizability of polytopal spheres with slack-matrix positive polynomials"};
  app.require_subcommand(1);

  RunConfig config;
  std::string flag_text, avoid_text, fix_text, format_text = "text";
  std::vector<std::string> basis_text, orientation_text, grid_text;
  double time_limit = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--flag", flag_text, "Flag of facets i1,...,i(d+1)");
    sub->add_option("--basis", basis_text, "Facet basis j:v1,...,vd (repeatable)");
    sub->add_option("--orientation", orientation_text, "Facet orientation j:+1|-1 (repeatable)");
    sub->add_option("--format", format_text, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--time-limit", time_limit, "Time limit in seconds");
    sub->add_flag("--timings", config.timings, "Include stage wall times in the report");
    sub->add_flag("--redundant-bases", config.heuristics.redundant_bases,
                  "Add columns for alternative bases of non-simplicial facets");
  };
  auto search = [&](CLI::App* sub) {
    sub->add_option("-k", config.k, "Maximum number of factors per product");
    sub->add_option("-l", config.l, "Maximum degree of each factor");
    sub->add_option("--avoid", avoid_text, "Vertex avoidance set v1,...");
    sub->add_option("--fix", fix_text, "Vertex fixing set v1,...");
    sub->add_flag("--monomial-simplify", config.heuristics.monomial_simplify,
                  "Replace entries by their cofactors after removing monomial content");
    sub->add_option("--trials", config.trials, "Random matrices for the Grassmannian check");
  };

  auto* certify = app.add_subcommand("certify", "Search for a certificate of non-realizability");
  certify->add_option("sphere", config.input, "Sphere file")->required();
  common(certify);
  search(certify);
  certify->add_flag("--dump-matrices", config.dump_matrices, "Include the matrices in the report");
  certify->add_option("--dump-tableau", config.dump_tableau, "Write the LP pivot log and final tableau here");
  certify->add_option("--out", config.out, "Write the certificate JSON here");

  auto* parametrize = app.add_subcommand("parametrize", "Print the reduced and parametrized slack matrices");
  parametrize->add_option("sphere", config.input, "Sphere file")->required();
  common(parametrize);

  auto* orient = app.add_subcommand("orient", "Infer facet orientations");
  orient->add_option("sphere", config.input, "Sphere file")->required();
  common(orient);

  auto* verify = app.add_subcommand("verify", "Verify a certificate against a sphere");
  verify->add_option("certificate", config.input, "Certificate file")->required();
  verify->add_option("--against", config.against, "Sphere file")->required();
  verify->add_option("--trials", config.trials, "Random matrices for the Grassmannian check");
  common(verify);

  auto* check_final = app.add_subcommand("check-final", "Check a final polynomial on random matrices");
  check_final->add_option("file", config.input, "Certificate or final polynomial JSON")->required();
  check_final->add_option("--trials", config.trials, "Random matrices");
  check_final->add_option("--format", format_text, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* batch_cmd = app.add_subcommand("batch", "Certify every sphere file in a directory over a (k,l) grid");
  batch_cmd->add_option("directory", config.input, "Directory of sphere files")->required();
  batch_cmd->add_option("--grid", grid_text, "Grid cell k,l (repeatable, tried in order)");
  search(batch_cmd);
  batch_cmd->add_option("--format", format_text, "Output format")->check(CLI::IsMember({"text", "json"}));
  batch_cmd->add_option("--time-limit", time_limit, "Time limit per run in seconds");
  batch_cmd->add_flag("--redundant-bases", config.heuristics.redundant_bases,
                      "Add columns for alternative bases of non-simplicial facets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  try {
    if (app.got_subcommand(certify)) config.subcommand = Subcommand::Certify;
    if (app.got_subcommand(parametrize)) config.subcommand = Subcommand::Parametrize;
    if (app.got_subcommand(orient)) config.subcommand = Subcommand::Orient;
    if (app.got_subcommand(verify)) config.subcommand = Subcommand::Verify;
    if (app.got_subcommand(check_final)) config.subcommand = Subcommand::CheckFinal;
    if (app.got_subcommand(batch_cmd)) config.subcommand = Subcommand::Batch;
    config.format = format_text == "json" ? OutputFormat::Json : OutputFormat::Text;
    if (!flag_text.empty()) config.flag = parse_labels(flag_text, "flag facet");
    config.heuristics.avoid = parse_labels(avoid_text, "vertex");
    config.heuristics.fix = parse_labels(fix_text, "vertex");
    for (const auto& text : basis_text) {
      auto [j, rest] = split_keyed(text, "--basis");
      config.bases[j] = parse_labels(rest, "basis vertex");
    }
    for (const auto& text : orientation_text) {
      auto [j, rest] = split_keyed(text, "--orientation");
      if (rest != "+1" && rest != "1" && rest != "-1") throw InvalidInput("--orientation sign must be +1 or -1");
      config.orientation[j] = rest == "-1" ? -1 : 1;
    }
    for (const auto& text : grid_text) {
      auto cell = parse_labels(text, "grid value");
      if (cell.size() != 2) throw InvalidInput("--grid cells look like k,l");
      config.grid.emplace_back(cell[0] + 1, cell[1] + 1);
    }
    if (time_limit != 0) config.time_limit = time_limit;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  Report report = config.subcommand == Subcommand::Batch ? batch(config) : run(config);
  out << render(report, config.format);
  if (report.data.contains("error")) {
    err << "error (" << report.data["error"]["stage"].get<std::string>()
        << "): " << report.data["error"]["message"].get<std::string>() << "\n";
  }
  return report.exit_code;
}

}  // namespace slackcert
