#include "rexinfer/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "rexinfer/coverage.h"
#include "rexinfer/datagen.h"
#include "rexinfer/driver.h"
#include "rexinfer/error.h"
#include "rexinfer/glushkov.h"
#include "rexinfer/io.h"
#include "rexinfer/rewrite.h"
#include "rexinfer/select.h"

namespace rexinfer {

namespace {

using json = nlohmann::json;

struct LearnOptions {
  std::size_t kmax = 4;
  std::size_t restarts = 10;
  std::string bw_iters = "auto";
  double bw_epsilon = 1e-6;
  std::string measure = "size";
  std::uint64_t seed = 1;
  bool oracle = false;
  std::size_t oracle_budget = 12;
};

struct InferOptions {
  LearnOptions learn;
  std::string sample;
  std::string dump_automaton;
  std::string json_report;
  std::string dtd;
};

struct GenerateOptions {
  std::string expr;
  std::string family;
  std::size_t n = 0;
  std::size_t size = 100;
  bool covering = false;
  std::optional<double> coverage;
  std::size_t corpus = 0;
  std::size_t alphabet_size = 5;
  std::size_t k = 1;
  std::uint64_t seed = 1;
  std::string output;
};

struct EvaluateOptions {
  LearnOptions learn;
  std::string corpus;
  std::size_t size = 300;
  bool covering = false;
  std::string json_report;
};

struct XmlOptions {
  LearnOptions learn;
  std::vector<std::string> paths;
  std::string element;
  std::string output_dir;
  bool dtd = false;
};

struct TranslateOptions {
  std::string expr;
  std::string automaton;
};

void add_learn_flags(CLI::App* cmd, LearnOptions& o) {
  cmd->add_option("--kmax", o.kmax, "Largest occurrence bound k")->check(CLI::Range(1, 16))->capture_default_str();
  cmd->add_option("--restarts", o.restarts, "Restarts per k")->check(CLI::Range(1, 1000))->capture_default_str();
  cmd->add_option("--bw-iters", o.bw_iters, "Baum-Welch iterations per disambiguation step: N, auto or inf")
      ->capture_default_str();
  cmd->add_option("--bw-epsilon", o.bw_epsilon, "Relative log-likelihood convergence threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--measure", o.measure, "Candidate measure")
      ->check(CLI::IsMember({"size", "mdl"}))
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_flag("--oracle", o.oracle, "Use the enumerative learner (at most 3 symbols)");
  cmd->add_option("--oracle-budget", o.oracle_budget, "Expression length budget for --oracle")
      ->check(CLI::Range(1, 60))
      ->capture_default_str();
}

InferConfig infer_config(const LearnOptions& o) {
  InferConfig cfg;
  cfg.kmax = o.kmax;
  cfg.restarts = o.restarts;
  cfg.bw_epsilon = o.bw_epsilon;
  cfg.measure = parse_measure(o.measure);
  cfg.seed = o.seed;
  if (o.bw_iters == "inf") {
    cfg.bw_iters = 0;
  } else if (o.bw_iters != "auto") {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(o.bw_iters, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != o.bw_iters.size() || v == 0) throw InputError("--bw-iters expects a positive integer, auto or inf");
    cfg.bw_iters = v;
  }
  return cfg;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

json candidate_json(const Candidate& c) {
  return {{"expression", render(c.expr)},
          {"k", c.k},
          {"language_size", c.language_size.str()},
          {"mdl_cost", c.mdl_cost},
          {"length", c.expr_length}};
}

struct Learned {
  Regex expr;
  json report;
  std::optional<Koa> automaton;
};

// idregex or oracle_learn per the options, with a report fragment.
Learned learn(const Sample& s, const LearnOptions& o, std::size_t threads = 0) {
  Learned out;
  if (o.oracle) {
    std::size_t k = std::min<std::size_t>(o.kmax, 2);
    std::size_t budget = std::min(o.oracle_budget, max_oracle_budget(s, k));
    auto r = oracle_learn(s, k, budget);
    out.expr = r.expr;
    out.report = {{"mode", "oracle"},      {"k", k},
                  {"budget", budget},      {"fell_back", r.fell_back},
                  {"enumerated", r.enumerated}, {"reached_length", r.reached_length}};
    return out;
  }
  InferConfig cfg = infer_config(o);
  cfg.threads = threads;
  auto r = idregex(s, cfg);
  out.expr = r.best.expr;
  json per_k = json::array();
  for (std::size_t k = 1; k <= cfg.kmax; ++k) {
    json runs = json::array();
    json cands = json::array();
    for (const auto& rs : r.restarts) {
      if (rs.k != k) continue;
      runs.push_back({{"restart", rs.restart},
                      {"seed", rs.seed},
                      {"status", status_name(rs.status)},
                      {"expression", rs.expr ? json(render(*rs.expr)) : json(nullptr)},
                      {"detail", rs.detail},
                      {"bw_calls", rs.bw_calls},
                      {"repairs", rs.repairs}});
    }
    for (const auto& c : r.candidates)
      if (c.k == k) cands.push_back(candidate_json(c));
    per_k.push_back({{"k", k}, {"restarts", runs}, {"candidates", cands}});
  }
  json all = json::array();
  for (const auto& c : r.candidates) all.push_back(candidate_json(c));
  out.report = {{"mode", "idregex"},
                {"kmax", cfg.kmax},
                {"restarts", cfg.restarts},
                {"bw_iters", r.bw_iters},
                {"bw_epsilon", cfg.bw_epsilon},
                {"seed", cfg.seed},
                {"measure", measure_name(cfg.measure)},
                {"per_k", per_k},
                {"candidates", all},
                {"best", candidate_json(r.best)}};
  for (const auto& rs : r.restarts)
    if (rs.status == RestartStatus::kAccepted && rs.expr && *rs.expr == r.best.expr) {
      out.automaton = rs.automaton;
      break;
    }
  return out;
}

int cmd_infer(const InferOptions& o, std::ostream& out) {
  auto start = std::chrono::steady_clock::now();
  Sample s = read_sample_file(o.sample);
  if (s.empty()) throw InputError(o.sample + ": sample has no words");
  Learned l = learn(s, o.learn);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << render(l.expr) << '\n';
  if (!o.dtd.empty()) out << "<!ELEMENT " << o.dtd << ' ' << to_dtd_content(l.expr) << ">\n";
  if (!o.json_report.empty()) {
    auto cov = edge_coverage(l.expr, s);
    json report = {{"expression", render(l.expr)},
                   {"sample",
                    {{"path", o.sample},
                     {"size", s.size()},
                     {"distinct", s.distinct_size()},
                     {"alphabet", s.alphabet()}}},
                   {"inference", l.report},
                   {"coverage", {{"witnessed", cov.witnessed}, {"edges", cov.total}, {"value", cov.value()}}},
                   {"wall_time_s", seconds}};
    write_json(o.json_report, report);
  }
  if (!o.dump_automaton.empty())
    write_json(o.dump_automaton, koa_to_json(l.automaton ? *l.automaton : glushkov_automaton(l.expr)));
  return kExitOk;
}

HardFamily parse_family(const std::string& name) {
  if (name == "r1") return HardFamily::kR1;
  if (name == "r2") return HardFamily::kR2;
  throw InputError("unknown family '" + name + "' (expected r1 or r2)");
}

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) throw InputError("cannot write '" + o.output + "'");
  }
  std::ostream& dst = o.output.empty() ? out : file;
  std::mt19937_64 rng(o.seed);
  int sources = !o.expr.empty() + !o.family.empty() + (o.corpus > 0);
  if (sources != 1) throw InputError("generate needs exactly one of --expr, --family or --corpus");
  if (o.corpus > 0) {
    for (std::size_t i = 0; i < o.corpus; ++i) {
      GenConfig cfg = default_gen_config(o.alphabet_size, o.k, rng);
      dst << render(gen_expression(cfg, rng).expr) << '\n';
    }
    return kExitOk;
  }
  Regex r = o.expr.empty() ? hard_family(o.n, parse_family(o.family)) : parse(o.expr);
  if (o.covering && o.coverage) throw InputError("--covering and --coverage are exclusive");
  Sample s;
  if (o.covering) {
    s = covering_sample(r, rng, o.size);
  } else {
    SampleGenConfig cfg;
    cfg.size = o.size;
    s = gen_sample(r, cfg, rng);
    if (o.coverage) s = subsample_to_coverage(r, s, *o.coverage, rng);
  }
  write_sample(dst, s);
  return kExitOk;
}

std::string kappa_bucket(double kappa) {
  double lo = 1.0 + 0.2 * std::floor((kappa - 1.0) / 0.2 + 1e-9);
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << '[' << lo << ',' << lo + 0.2 << ')';
  return s.str();
}

std::string decile_bucket(double fraction) {
  int d = std::min(9, static_cast<int>(std::floor(fraction * 10)));
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << '[' << d / 10.0 << ',' << (d + 1) / 10.0 << ')';
  return s.str();
}

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  std::ifstream in(o.corpus);
  if (!in) throw InputError("cannot open corpus '" + o.corpus + "'");
  std::vector<Regex> targets;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    try {
      targets.push_back(parse(line));
    } catch (const InputError& e) {
      throw InputError(o.corpus + ":" + std::to_string(no) + ": " + e.what());
    }
    if (!is_deterministic(targets.back()))
      throw InputError(o.corpus + ":" + std::to_string(no) + ": target is not deterministic");
  }
  struct Row {
    bool success = false;
    std::string learned;
    std::size_t alphabet = 0;
    double fraction = 0;
    double kappa = 0;
  };
  std::vector<Row> rows(targets.size());
  std::vector<std::exception_ptr> errors(targets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < targets.size();) {
      try {
        const Regex& r = targets[i];
        std::mt19937_64 rng(restart_seed(o.learn.seed, 0, i));
        Sample s;
        if (o.covering) {
          s = covering_sample(r, rng, o.size);
        } else {
          SampleGenConfig cfg;
          cfg.size = o.size;
          s = gen_sample(r, cfg, rng);
        }
        Learned l = learn(s, o.learn, 1);
        auto st = stats(r);
        rows[i] = {equivalent(l.expr, r), render(l.expr), st.alphabet.size(),
                   language_fraction(r, st.alphabet.size()), st.kappa.value_or(0)};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t workers = std::min(thread_count(), std::max<std::size_t>(targets.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  struct Tally {
    std::size_t total = 0, success = 0;
  };
  std::map<std::string, std::map<std::string, Tally>> tables;
  for (const auto& row : rows) {
    for (const auto& [table, key] : {std::pair<std::string, std::string>{"alphabet", std::to_string(row.alphabet)},
                                     {"language_size", decile_bucket(row.fraction)},
                                     {"kappa", kappa_bucket(row.kappa)}}) {
      auto& t = tables[table][key];
      ++t.total;
      t.success += row.success;
    }
  }
  json report = {{"corpus", o.corpus}, {"entries", json::array()}, {"tables", json::object()}};
  for (std::size_t i = 0; i < rows.size(); ++i)
    report["entries"].push_back({{"target", render(targets[i])},
                                 {"learned", rows[i].learned},
                                 {"success", rows[i].success},
                                 {"alphabet", rows[i].alphabet},
                                 {"language_fraction", rows[i].fraction},
                                 {"kappa", rows[i].kappa}});
  for (const char* table : {"alphabet", "language_size", "kappa"}) {
    out << "by " << table << '\n';
    out << std::left << std::setw(14) << "group" << std::right << std::setw(8) << "total" << std::setw(9) << "success"
        << std::setw(8) << "rate" << '\n';
    report["tables"][table] = json::array();
    for (const auto& [key, t] : tables[table]) {
      double rate = t.total ? static_cast<double>(t.success) / t.total : 0.0;
      out << std::left << std::setw(14) << key << std::right << std::setw(8) << t.total << std::setw(9) << t.success
          << std::setw(8) << std::fixed << std::setprecision(2) << rate << '\n';
      report["tables"][table].push_back({{"group", key}, {"total", t.total}, {"success", t.success}, {"rate", rate}});
    }
  }
  std::size_t ok = std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.success; });
  out << "overall " << ok << '/' << rows.size() << '\n';
  if (!o.json_report.empty()) write_json(o.json_report, report);
  return kExitOk;
}

int cmd_xml_extract(const XmlOptions& o, std::ostream& out, std::ostream& err) {
  XmlExtraction x;
  for (const auto& p : o.paths) extract_child_sequences_file(p, x);
  for (const auto& w : x.warnings) err << "warning: " << w << '\n';
  std::vector<std::string> names;
  if (!o.element.empty()) {
    if (!x.samples.count(o.element)) throw InputError("element <" + o.element + "> does not occur");
    names.push_back(o.element);
  } else {
    for (const auto& [n, s] : x.samples) names.push_back(n);
  }
  for (const auto& n : names) {
    const Sample& s = x.samples.at(n);
    if (o.dtd) {
      out << "<!ELEMENT " << n << ' ' << to_dtd_content(learn(s, o.learn).expr) << ">\n";
    } else if (!o.output_dir.empty()) {
      std::filesystem::create_directories(o.output_dir);
      write_sample_file((std::filesystem::path(o.output_dir) / (n + ".txt")).string(), s);
    } else {
      if (names.size() > 1) out << "# element " << n << '\n';
      write_sample(out, s);
    }
  }
  return kExitOk;
}

int cmd_translate(const TranslateOptions& o, std::ostream& out) {
  if (o.expr.empty() == o.automaton.empty()) throw InputError("translate needs exactly one of --expr or --automaton");
  if (!o.expr.empty()) {
    out << koa_to_json(glushkov_automaton(parse(o.expr))).dump(2) << '\n';
    return kExitOk;
  }
  std::ifstream in(o.automaton);
  if (!in) throw InputError("cannot open automaton '" + o.automaton + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(o.automaton + ": " + e.what());
  }
  Koa g = koa_from_json(j);
  try {
    g.validate();
  } catch (const InvariantError& e) {
    throw InputError(o.automaton + ": " + e.what());
  }
  auto t = soa_to_sore(marking(g));
  Regex r = simplify(strip(t.expr));
  out << render(r) << '\n';
  if (t.repairs > 0) out << "# super-approximation: " << t.repairs << " edges added\n";
  if (!is_deterministic(r)) out << "# not deterministic\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infers deterministic regular expressions from positive example words."};
  app.require_subcommand(1);

  InferOptions infer;
  auto* c_infer = app.add_subcommand("infer", "Infer an expression from a sample file");
  c_infer->add_option("sample", infer.sample, "Sample file (one word per line)")->required();
  add_learn_flags(c_infer, infer.learn);
  c_infer->add_option("--dump-automaton", infer.dump_automaton, "Write the chosen k-OA as JSON");
  c_infer->add_option("--json-report", infer.json_report, "Write a JSON report");
  c_infer->add_option("--dtd", infer.dtd, "Also print an <!ELEMENT> line for this element name");

  GenerateOptions gen;
  auto* c_gen = app.add_subcommand("generate", "Generate expressions or samples");
  c_gen->add_option("--expr", gen.expr, "Target expression");
  c_gen->add_option("--family", gen.family, "Hard family r1 or r2")->check(CLI::IsMember({"r1", "r2"}));
  c_gen->add_option("--n", gen.n, "Family parameter");
  c_gen->add_option("--size", gen.size, "Sample size")->capture_default_str();
  c_gen->add_flag("--covering", gen.covering, "Cover every automaton edge, padded to --size");
  c_gen->add_option("--coverage", gen.coverage, "Subsample to at most this edge coverage")->check(CLI::Range(0.0, 1.0));
  c_gen->add_option("--corpus", gen.corpus, "Emit this many random deterministic expressions");
  c_gen->add_option("--alphabet-size", gen.alphabet_size, "Corpus alphabet size")->check(CLI::Range(1, 64));
  c_gen->add_option("--k", gen.k, "Corpus occurrence bound")->check(CLI::Range(1, 8));
  c_gen->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  c_gen->add_option("-o,--output", gen.output, "Output file (default stdout)");

  EvaluateOptions eval;
  auto* c_eval = app.add_subcommand("evaluate", "Success rates over an expression corpus");
  c_eval->add_option("corpus", eval.corpus, "Corpus file (one expression per line)")->required();
  add_learn_flags(c_eval, eval.learn);
  c_eval->add_option("--size", eval.size, "Sample size per target")->capture_default_str();
  c_eval->add_flag("--covering", eval.covering, "Use covering samples");
  c_eval->add_option("--json-report", eval.json_report, "Write a JSON report");

  XmlOptions xml;
  auto* c_xml = app.add_subcommand("xml-extract", "Child-element sequences from XML documents");
  c_xml->add_option("paths", xml.paths, "XML files")->required();
  c_xml->add_option("--element", xml.element, "Only this element");
  c_xml->add_option("--output-dir", xml.output_dir, "Write one NAME.txt sample per element");
  c_xml->add_flag("--dtd", xml.dtd, "Infer and print one <!ELEMENT> line per element");
  add_learn_flags(c_xml, xml.learn);

  TranslateOptions tr;
  auto* c_tr = app.add_subcommand("translate", "Glushkov automaton of an expression, or expression of an automaton");
  c_tr->add_option("--expr", tr.expr, "Expression to translate to a JSON automaton");
  c_tr->add_option("--automaton", tr.automaton, "JSON automaton to translate to an expression");

  std::vector<const char*> argv{"rexinfer"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (c_infer->parsed()) return cmd_infer(infer, out);
    if (c_gen->parsed()) return cmd_generate(gen, out);
    if (c_eval->parsed()) return cmd_evaluate(eval, out);
    if (c_xml->parsed()) return cmd_xml_extract(xml, out, err);
    if (c_tr->parsed()) return cmd_translate(tr, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitFailure;
}

}  // namespace rexinfer
