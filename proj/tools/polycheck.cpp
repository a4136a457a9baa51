// Command-line driver: check, run, compile, verify and metrics.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polycheck/backends.hpp"
#include "polycheck/frontend.hpp"
#include "polycheck/hl_interpreter.hpp"
#include "polycheck/interp.hpp"
#include "polycheck/pullback.hpp"
#include "polycheck/rewriter.hpp"
#include "polycheck/simple_fp.hpp"

using namespace polycheck;
using json = nlohmann::json;

namespace {

constexpr int kExitValid = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUserError = 3;

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// File being processed, for diagnostics.
std::string g_current;

hl::Program load(const std::string& path) {
  g_current = path;
  return typecheck_program(parse_program(read_file(path)));
}

// A formula argument is either formula text or @file.
fo::Formula load_spec(const std::string& arg) {
  return parse_spec(!arg.empty() && arg.front() == '@' ? read_file(arg.substr(1)) : arg);
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Pipeline {
  hl::Program program;
  RewriteResult rewrite;
  Interpretation interp;
  double rewrite_seconds = 0;
  double compile_seconds = 0;
};

Pipeline build(const std::string& path) {
  Pipeline p;
  p.program = load(path);
  auto t0 = std::chrono::steady_clock::now();
  p.rewrite = rewrite_to_simple(p.program);
  p.rewrite_seconds = since(t0);
  t0 = std::chrono::steady_clock::now();
  p.interp = compile_interpretation(p.rewrite.simple);
  p.compile_seconds = since(t0);
  return p;
}

json metrics_json(const Pipeline& p) {
  const auto hm = sp::metrics(p.program);
  const auto sm = sp::metrics(p.rewrite.simple);
  return {{"fp", {{"size", hm.size}, {"loop_depth", hm.loop_depth}, {"bool_depth", hm.bool_depth}}},
          {"simple", {{"size", sm.size}, {"loop_depth", sm.loop_depth}, {"bool_depth", sm.bool_depth}}},
          {"interp",
           {{"size", p.interp.size()}, {"qrank", p.interp.qrank()}, {"tags", p.interp.tags.size()},
            {"arity", p.interp.max_arity()}}}};
}

std::string metrics_row(const std::string& name, const Pipeline& p, std::size_t width = 22) {
  const auto hm = sp::metrics(p.program);
  const auto sm = sp::metrics(p.rewrite.simple);
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << name << std::right << " FP " << std::setw(5) << hm.size << std::setw(3)
      << hm.loop_depth << std::setw(3) << hm.bool_depth << " | S.FP " << std::setw(5) << sm.size << std::setw(3)
      << sm.loop_depth << std::setw(3) << sm.bool_depth << " | FO-I " << std::setw(9) << p.interp.size()
      << std::setw(4) << p.interp.qrank();
  return out.str();
}

int cmd_check(const std::string& path) {
  const auto p = load(path);
  std::cout << path << ": ok, main : " << signature(p.main_function()) << "\n";
  return 0;
}

int cmd_run(const std::string& path, const std::string& input, bool nested) {
  const auto p = load(path);
  const Value v = eval_program(p, NestedWord::word(decode_utf8(input)));
  if (const auto* b = std::get_if<bool>(&v)) std::cout << (*b ? "True" : "False") << "\n";
  else std::cout << format(std::get<NestedWord>(v), nested ? OutputFormat::Nested : OutputFormat::Separated) << "\n";
  return 0;
}

int cmd_compile(const std::string& path, const std::string& emit, const std::string& dump_pass, const std::string& pre,
                const std::string& post) {
  if (!dump_pass.empty()) {
    const auto p = load(path);
    const auto r = rewrite_to_simple(p);
    if (dump_pass.size() != 1 || dump_pass[0] < 'A' || dump_pass[0] > 'H')
      throw UserError("--dump-pass expects one of A..H");
    for (const auto& [id, stage] : r.stages)
      if (id == dump_pass[0]) std::cout << hl::to_string(stage);
    return 0;
  }
  if (emit == "simple") {
    std::cout << sp::to_string(rewrite_to_simple(load(path)).simple);
    return 0;
  }
  const Pipeline p = build(path);
  if (emit == "interp") {
    std::cout << to_string(p.interp);
    return 0;
  }
  const VerificationFormula chi = build_chi(load_spec(pre), p.interp, load_spec(post));
  std::cout << (emit == "smtlib" ? emit_smtlib(chi) : emit_mona(chi));
  return 0;
}

struct VerifyArgs {
  std::string path;
  std::string pre = "true";
  std::string post = "true";
  std::vector<std::string> backends;
  double timeout = 5;
  int maxlen = 6;
  bool dump_chi = false;
  bool naive = false;
  bool as_json = false;
};

int cmd_verify(const VerifyArgs& a) {
  std::vector<Backend> backends;
  for (const auto& name : a.backends) {
    auto b = parse_backend(name);
    if (!b) throw UserError("unknown backend " + name);
    backends.push_back(*b);
  }
  if (backends.empty()) backends = {Backend::Z3, Backend::Cvc5, Backend::Mona, Backend::Bounded};
  const bool bounded_only = std::all_of(backends.begin(), backends.end(), [](Backend b) { return b == Backend::Bounded; });

  const fo::Formula pre = load_spec(a.pre);
  const fo::Formula post = load_spec(a.post);
  const Pipeline p = build(a.path);
  auto t0 = std::chrono::steady_clock::now();
  const VerificationFormula chi = build_chi(pre, p.interp, post, a.naive);
  const double chi_seconds = since(t0);
  if (a.dump_chi) std::cerr << fo::to_string(chi.chi) << "\n";

  SolverOptions opts;
  opts.timeout = a.timeout;
  opts.bounded_max_length = a.maxlen;
  auto verdicts = run_portfolio(backends, chi, opts);

  // Counterexamples are replayed on the source program before being trusted.
  int exit_code = kExitUnknown;
  std::optional<Word> counterexample;
  std::string note;
  for (auto& v : verdicts) {
    if (v.kind != VerdictKind::Invalid || !v.counterexample) continue;
    const Word& w = *v.counterexample;
    const bool replays = fo::eval_formula(pre, w) && !fo::eval_formula(post, run_word(p.program, w));
    if (!replays) {
      note = "counterexample from " + std::string(backend_name(v.backend)) + " does not replay";
      v.counterexample.reset();
    }
  }
  if (!verdicts.empty()) {
    const Verdict& top = verdicts.front();
    if (top.kind == VerdictKind::Invalid) {
      exit_code = kExitInvalid;
      counterexample = top.counterexample;
    } else if (top.kind == VerdictKind::Valid && (!top.bounded_only || bounded_only)) {
      exit_code = kExitValid;
    }
  }

  if (a.as_json) {
    json j;
    j["program"] = a.path;
    j["pre"] = a.pre;
    j["post"] = a.post;
    j["verdict"] = exit_code == kExitValid ? "valid" : exit_code == kExitInvalid ? "invalid" : "unknown";
    if (counterexample) j["counterexample"] = encode_utf8(*counterexample);
    j["backends"] = json::array();
    for (const auto& v : verdicts) {
      json b{{"backend", backend_name(v.backend)}, {"seconds", v.seconds}};
      b["verdict"] = v.kind == VerdictKind::Valid ? "valid" : v.kind == VerdictKind::Invalid ? "invalid" : "unknown";
      if (v.kind == VerdictKind::Unknown) b["reason"] = reason_name(v.reason);
      if (v.bounded_only) b["bounded_max_length"] = a.maxlen;
      if (v.counterexample) b["counterexample"] = encode_utf8(*v.counterexample);
      j["backends"].push_back(b);
    }
    j["chi"] = {{"qrank", chi.qrank}, {"size", chi.size}};
    j["metrics"] = metrics_json(p);
    j["timings"] = {{"rewrite", p.rewrite_seconds}, {"interp", p.compile_seconds}, {"chi", chi_seconds}};
    if (!note.empty()) j["note"] = note;
    std::cout << j.dump(2) << "\n";
    return exit_code;
  }
  for (const auto& v : verdicts) std::cout << to_string(v) << " [" << std::fixed << std::setprecision(3) << v.seconds << "s]\n";
  if (!note.empty()) std::cout << "note: " << note << "\n";
  std::cout << "chi: qrank " << chi.qrank << ", size " << chi.size << "\n";
  std::cout << metrics_row(a.path, p) << "\n";
  switch (exit_code) {
    case kExitValid: std::cout << "result: Valid\n"; break;
    case kExitInvalid:
      std::cout << "result: Invalid";
      if (counterexample) std::cout << ", counterexample " << quote_word(*counterexample);
      std::cout << "\n";
      break;
    default: std::cout << "result: Unknown\n";
  }
  return exit_code;
}

int cmd_metrics(const std::vector<std::string>& paths, bool as_json) {
  json all = json::array();
  std::size_t width = 0;
  for (const auto& path : paths) width = std::max(width, path.size());
  for (const auto& path : paths) {
    const Pipeline p = build(path);
    if (as_json) {
      json j = metrics_json(p);
      j["program"] = path;
      all.push_back(j);
    } else {
      std::cout << metrics_row(path, p, width) << "\n";
    }
  }
  if (as_json) std::cout << all.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compiler and Hoare-triple verifier for for-programs"};
  app.require_subcommand(1);

  std::string path;
  auto* check = app.add_subcommand("check", "Parse and typecheck a program");
  check->add_option("program", path, "Program file")->required();

  std::string input;
  std::string run_format = "separated";
  auto* run = app.add_subcommand("run", "Run a program on an input word");
  run->add_option("program", path, "Program file")->required();
  run->add_option("--input", input, "Input word (UTF-8)");
  run->add_option("--format", run_format, "Output format")->check(CLI::IsMember({"separated", "json-like-nested"}));

  std::string emit = "simple";
  std::string dump_pass;
  std::string pre = "true";
  std::string post = "true";
  auto* compile = app.add_subcommand("compile", "Emit an intermediate or solver representation");
  compile->add_option("program", path, "Program file")->required();
  compile->add_option("--emit", emit, "Output kind")->check(CLI::IsMember({"simple", "interp", "smtlib", "mona"}));
  compile->add_option("--dump-pass", dump_pass, "Print the program after pass A..H");
  compile->add_option("--pre", pre, "Precondition for smtlib/mona (formula or @file)");
  compile->add_option("--post", post, "Postcondition for smtlib/mona (formula or @file)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Decide a Hoare triple {pre} program {post}");
  verify->add_option("program", va.path, "Program file")->required();
  verify->add_option("--pre", va.pre, "Precondition (formula or @file)");
  verify->add_option("--post", va.post, "Postcondition (formula or @file)");
  verify->add_option("--backend", va.backends, "z3, cvc5, mona or bounded; repeatable")->delimiter(',');
  verify->add_option("--timeout", va.timeout, "Solver timeout in seconds")->check(CLI::PositiveNumber);
  verify->add_option("--maxlen", va.maxlen, "Length bound of the bounded backend")->check(CLI::Range(1, 64));
  verify->add_flag("--dump-chi", va.dump_chi, "Print the verification formula on stderr");
  verify->add_flag("--naive-pullback", va.naive, "Use the per-tag reference pullback");
  verify->add_flag("--json", va.as_json, "Machine-readable report");

  std::vector<std::string> paths;
  bool metrics_json_flag = false;
  auto* metrics = app.add_subcommand("metrics", "Size and depth of each compilation stage");
  metrics->add_option("programs", paths, "Program files")->required();
  metrics->add_flag("--json", metrics_json_flag, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUserError;
  }

  try {
    if (*check) return cmd_check(path);
    if (*run) return cmd_run(path, input, run_format == "json-like-nested");
    if (*compile) return cmd_compile(path, emit, dump_pass, pre, post);
    if (*verify) return cmd_verify(va);
    if (*metrics) return cmd_metrics(paths, metrics_json_flag);
  } catch (const CompileError& e) {
    std::cerr << "error[" << category_name(e.category()) << "] " << g_current << ":" << e.span().to_string() << ": "
              << e.detail() << "\n";
    return kExitUserError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUserError;
  }
  return kExitUserError;
}
