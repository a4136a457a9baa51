#include "polycheck/backends.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace polycheck {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// χ with tag quantifiers unfolded when there are no tags, since neither
// encoding has an empty sort.
fo::Formula encodable(const VerificationFormula& v) {
  return v.tag_count == 0 ? fo::expand_finite_sorts(v.chi, 0) : v.chi;
}

std::string letter_symbol(Letter c) {
  if (c == kBlank) return "letter_blank";
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))
    return "letter_" + std::string(1, static_cast<char>(c));
  char buf[16];
  std::snprintf(buf, sizeof buf, "letter_u%04X", static_cast<unsigned>(c));
  return buf;
}

std::string tag_symbol(std::uint32_t t) { return "tag_" + std::to_string(t + 1); }

// Formulas are DAGs; both printers expand shared nodes, memoizing the text.
class SmtPrinter {
 public:
  std::string print(const fo::Formula& f) {
    if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
    std::string out = render(*f);
    memo_.emplace(f.get(), out);
    return out;
  }

  static std::string symbol(fo::Var v) { return "|v." + fo::var_name(v) + "|"; }

 private:
  std::string render(const fo::Node& n) {
    switch (n.kind) {
      case fo::Kind::True: return "true";
      case fo::Kind::False: return "false";
      case fo::Kind::Not: return "(not " + print(n.kids.front()) + ")";
      case fo::Kind::And:
      case fo::Kind::Or: {
        std::string out = n.kind == fo::Kind::And ? "(and" : "(or";
        for (const auto& k : n.kids) out += " " + print(k);
        return out + ")";
      }
      case fo::Kind::Exists:
      case fo::Kind::Forall: {
        const bool ex = n.kind == fo::Kind::Exists;
        const std::string x = symbol(n.a);
        std::string head = std::string(ex ? "(exists ((" : "(forall ((") + x + " ";
        const std::string body = print(n.kids.front());
        switch (n.sort) {
          case fo::Sort::Pos: {
            const std::string range = "(and (<= 0 " + x + ") (< " + x + " len))";
            return head + "Int)) " + (ex ? "(and " : "(=> ") + range + " " + body + "))";
          }
          case fo::Sort::Tag: return head + "Tag)) " + body + ")";
          case fo::Sort::Bool: return head + "Bool)) " + body + ")";
        }
        return "";
      }
      case fo::Kind::PosEq:
      case fo::Kind::TagEq: return "(= " + symbol(n.a) + " " + symbol(n.b) + ")";
      case fo::Kind::PosLt: return "(< " + symbol(n.a) + " " + symbol(n.b) + ")";
      case fo::Kind::LetterAt: return "(= (word " + symbol(n.a) + ") " + letter_symbol(n.letter) + ")";
      case fo::Kind::TagIs: return "(= " + symbol(n.a) + " " + tag_symbol(n.tag) + ")";
      case fo::Kind::BoolVar: return symbol(n.a);
    }
    return "";
  }

  std::unordered_map<const fo::Node*, std::string> memo_;
};

class MonaPrinter {
 public:
  explicit MonaPrinter(int prefix, std::uint32_t tags) : prefix_(prefix), tags_(tags) {}

  std::string print(const fo::Formula& f) {
    if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
    std::string out = render(*f);
    memo_.emplace(f.get(), out);
    return out;
  }

  static std::string symbol(fo::Var v) {
    std::string s = "v_";
    for (char c : fo::var_name(v)) s += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return s + "_" + std::to_string(v.id);
  }

 private:
  std::string render(const fo::Node& n) {
    switch (n.kind) {
      case fo::Kind::True: return "true";
      case fo::Kind::False: return "false";
      case fo::Kind::Not: return "~(" + print(n.kids.front()) + ")";
      case fo::Kind::And:
      case fo::Kind::Or: {
        std::string out = "(";
        for (std::size_t k = 0; k < n.kids.size(); ++k) {
          if (k != 0) out += n.kind == fo::Kind::And ? " & " : " | ";
          out += print(n.kids[k]);
        }
        return out + ")";
      }
      case fo::Kind::Exists:
      case fo::Kind::Forall: {
        const bool ex = n.kind == fo::Kind::Exists;
        const std::string x = symbol(n.a);
        std::string range;
        switch (n.sort) {
          case fo::Sort::Pos: range = x + " >= " + std::to_string(prefix_); break;
          case fo::Sort::Tag: range = x + " < " + std::to_string(tags_); break;
          case fo::Sort::Bool: range = x + " <= 1"; break;
        }
        return std::string(ex ? "(ex1 " : "(all1 ") + x + ": " + range + (ex ? " & " : " => ") + print(n.kids.front()) +
               ")";
      }
      case fo::Kind::PosEq:
      case fo::Kind::TagEq: return symbol(n.a) + " = " + symbol(n.b);
      case fo::Kind::PosLt: return symbol(n.a) + " < " + symbol(n.b);
      case fo::Kind::LetterAt: return symbol(n.a) + " in " + set_name(n.letter);
      case fo::Kind::TagIs: return symbol(n.a) + " = " + std::to_string(n.tag);
      case fo::Kind::BoolVar: return symbol(n.a) + " = 1";
    }
    return "";
  }

 public:
  static std::string set_name(Letter c) {
    std::string s = letter_symbol(c);
    s[0] = 'L';
    return s;
  }

 private:
  int prefix_;
  std::uint32_t tags_;
  std::unordered_map<const fo::Node*, std::string> memo_;
};

Letter symbol_letter(const std::string& sym, const std::vector<Letter>& alphabet) {
  for (Letter c : alphabet)
    if (letter_symbol(c) == sym) return c;
  throw std::invalid_argument("unknown letter symbol " + sym);
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Z3: return "z3";
    case Backend::Cvc5: return "cvc5";
    case Backend::Mona: return "mona";
    case Backend::Bounded: return "bounded";
  }
  return "?";
}

std::optional<Backend> parse_backend(std::string_view name) {
  if (name == "z3" || name == "smtlib-z3") return Backend::Z3;
  if (name == "cvc5" || name == "smtlib-cvc5") return Backend::Cvc5;
  if (name == "mona") return Backend::Mona;
  if (name == "bounded") return Backend::Bounded;
  return std::nullopt;
}

std::vector<Letter> chi_alphabet(const VerificationFormula& v) {
  std::set<Letter> s = fo::constants(v.chi);
  s.insert(kBlank);
  return {s.begin(), s.end()};
}

std::string emit_smtlib(const VerificationFormula& v, int model_positions) {
  std::ostringstream out;
  out << "(set-logic UFDTLIA)\n";
  out << "(set-option :produce-models true)\n";
  if (v.tag_count > 0) {
    out << "(declare-datatypes ((Tag 0)) ((";
    for (std::uint32_t t = 0; t < v.tag_count; ++t) out << (t ? " " : "") << "(" << tag_symbol(t) << ")";
    out << ")))\n";
  }
  out << "(declare-datatypes ((Letter 0)) ((";
  bool first = true;
  for (Letter c : chi_alphabet(v)) {
    out << (first ? "" : " ") << "(" << letter_symbol(c) << ")";
    first = false;
  }
  out << ")))\n";
  out << "(declare-fun word (Int) Letter)\n";
  out << "(declare-const len Int)\n";
  out << "(assert (>= len 0))\n";
  SmtPrinter printer;
  out << "(assert " << printer.print(encodable(v)) << ")\n";
  out << "(check-sat)\n(get-model)\n(get-value (len))\n";
  if (model_positions > 0) {
    out << "(get-value (";
    for (int k = 0; k < model_positions; ++k) out << (k ? " " : "") << "(word " << k << ")";
    out << "))\n";
  }
  return out.str();
}

std::string emit_mona(const VerificationFormula& v) {
  const int prefix = std::max<int>(static_cast<int>(v.tag_count), 2);
  const auto alphabet = chi_alphabet(v);
  std::ostringstream out;
  out << "# positions 0.." << prefix - 1 << " hold tags and booleans; the word starts at " << prefix << "\n";
  out << "m2l-str;\n";
  out << "var2 ";
  for (std::size_t k = 0; k < alphabet.size(); ++k) out << (k ? ", " : "") << MonaPrinter::set_name(alphabet[k]);
  out << ";\n";
  out << "ex1 p: p = " << prefix - 1 << ";\n";
  // Every word position carries exactly one letter; prefix positions none.
  out << "all1 p: (p < " << prefix << " => (";
  for (std::size_t k = 0; k < alphabet.size(); ++k)
    out << (k ? " & " : "") << "p notin " << MonaPrinter::set_name(alphabet[k]);
  out << ")) & (p >= " << prefix << " => (";
  for (std::size_t k = 0; k < alphabet.size(); ++k) {
    out << (k ? " | " : "") << "(";
    for (std::size_t j = 0; j < alphabet.size(); ++j)
      out << (j ? " & " : "") << "p " << (j == k ? "in " : "notin ") << MonaPrinter::set_name(alphabet[j]);
    out << ")";
  }
  out << "));\n";
  MonaPrinter printer(prefix, v.tag_count);
  out << printer.print(encodable(v)) << ";\n";
  return out.str();
}

std::string_view reason_name(UnknownReason r) {
  switch (r) {
    case UnknownReason::None: return "";
    case UnknownReason::Timeout: return "timeout";
    case UnknownReason::Memout: return "memout";
    case UnknownReason::SolverUnknown: return "solver-unknown";
    case UnknownReason::SolverMissing: return "solver-missing";
  }
  return "";
}

std::string to_string(const Verdict& v) {
  std::string out = std::string(backend_name(v.backend)) + ": ";
  switch (v.kind) {
    case VerdictKind::Valid: out += v.bounded_only ? "Valid (no counterexample up to the bound)" : "Valid"; break;
    case VerdictKind::Invalid:
      out += "Invalid";
      if (v.counterexample) out += ", counterexample " + quote_word(*v.counterexample);
      break;
    case VerdictKind::Unknown: out += "Unknown (" + std::string(reason_name(v.reason)) + ")"; break;
  }
  return out;
}

std::optional<std::string> solver_binary(Backend b, const SolverOptions& opts) {
  std::string path;
  const char* env = nullptr;
  const char* name = nullptr;
  switch (b) {
    case Backend::Z3: path = opts.z3_path, env = "POLYCHECK_Z3", name = "z3"; break;
    case Backend::Cvc5: path = opts.cvc5_path, env = "POLYCHECK_CVC5", name = "cvc5"; break;
    case Backend::Mona: path = opts.mona_path, env = "POLYCHECK_MONA", name = "mona"; break;
    case Backend::Bounded: return std::nullopt;
  }
  if (path.empty())
    if (const char* e = std::getenv(env); e != nullptr) path = e;
  if (!path.empty()) return ::access(path.c_str(), X_OK) == 0 ? std::optional(path) : std::nullopt;
  const char* sys_path = std::getenv("PATH");
  std::istringstream dirs(sys_path != nullptr ? sys_path : "/usr/local/bin:/usr/bin:/bin");
  for (std::string dir; std::getline(dirs, dir, ':');) {
    std::string candidate = (dir.empty() ? std::string(".") : dir) + "/" + name;
    if (::access(candidate.c_str(), X_OK) == 0) return candidate;
  }
  return std::nullopt;
}

ProcessResult run_process(const std::vector<std::string>& argv, double timeout, const std::atomic<bool>* cancel) {
  ProcessResult res;
  int fds[2];
  if (::pipe(fds) != 0) return res;
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    return res;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(fds[1], STDOUT_FILENO);
    ::dup2(fds[1], STDERR_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    ::execv(args[0], args.data());
    ::_exit(127);
  }
  res.started = true;
  ::close(fds[1]);
  ::fcntl(fds[0], F_SETFL, O_NONBLOCK);
  const auto t0 = Clock::now();
  bool open = true;
  char buf[4096];
  while (open) {
    if (since(t0) > timeout) {
      res.timed_out = true;
      break;
    }
    if (cancel != nullptr && cancel->load()) {
      res.cancelled = true;
      break;
    }
    pollfd p{fds[0], POLLIN, 0};
    if (::poll(&p, 1, 10) > 0) {
      const ssize_t n = ::read(fds[0], buf, sizeof buf);
      if (n > 0) res.output.append(buf, static_cast<std::size_t>(n));
      else if (n == 0) open = false;
    }
  }
  if (open) ::kill(-pid, SIGKILL), ::kill(pid, SIGKILL);
  ::close(fds[0]);
  int status = 0;
  ::waitpid(pid, &status, 0);
  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  return res;
}

namespace {

struct TempFile {
  explicit TempFile(const std::string& text, const char* suffix) {
    std::string tmpl = (std::filesystem::temp_directory_path() / "polycheck-XXXXXX").string() + suffix;
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    const int fd = ::mkstemps(buf.data(), static_cast<int>(std::strlen(suffix)));
    if (fd < 0) throw std::runtime_error("cannot create a temporary file");
    ::close(fd);
    path = buf.data();
    std::ofstream(path) << text;
  }
  ~TempFile() { std::filesystem::remove(path); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  std::string path;
};

Verdict unknown(Backend b, UnknownReason r, std::string raw = {}) {
  Verdict v;
  v.backend = b;
  v.reason = r;
  v.raw = std::move(raw);
  return v;
}

std::string first_line(const std::string& s) {
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (!line.empty()) return line;
  }
  return {};
}

// Reads len and the requested word cells; nullopt when the model does not
// cover the whole word.
std::optional<Word> decode_smt_model(const std::string& out, const std::vector<Letter>& alphabet) {
  std::smatch m;
  if (!std::regex_search(out, m, std::regex(R"(\(\(len (\d+)\)\))"))) return std::nullopt;
  const int len = std::stoi(m[1]);
  std::map<int, Letter> cells;
  const std::regex cell(R"(\(\(word (\d+)\)\s+(letter_\w+)\))");
  for (auto it = std::sregex_iterator(out.begin(), out.end(), cell); it != std::sregex_iterator(); ++it)
    cells[std::stoi((*it)[1])] = symbol_letter((*it)[2], alphabet);
  Word w;
  for (int k = 0; k < len; ++k) {
    auto c = cells.find(k);
    if (c == cells.end()) return std::nullopt;
    w.push_back(c->second);
  }
  return w;
}

Verdict run_smt(Backend b, const std::string& bin, const VerificationFormula& v, const SolverOptions& opts,
                const std::atomic<bool>* cancel) {
  const auto t0 = Clock::now();
  int cells = 16;
  for (int attempt = 0; attempt < 2; ++attempt) {
    TempFile file(emit_smtlib(v, cells), ".smt2");
    std::vector<std::string> argv{bin};
    if (b == Backend::Z3) argv.insert(argv.end(), {"-smt2", file.path});
    else argv.insert(argv.end(), {"--lang=smt2", "--produce-models", file.path});
    const double left = opts.timeout - since(t0);
    if (left <= 0) return unknown(b, UnknownReason::Timeout);
    ProcessResult pr = run_process(argv, left, cancel);
    Verdict verdict = unknown(b, UnknownReason::SolverUnknown, pr.output);
    if (!pr.started || pr.exit_code == 127) verdict.reason = UnknownReason::SolverMissing;
    else if (pr.timed_out || pr.cancelled) verdict.reason = UnknownReason::Timeout;
    else {
      const std::string head = first_line(pr.output);
      if (head == "unsat") {
        verdict.kind = VerdictKind::Valid;
        verdict.reason = UnknownReason::None;
      } else if (head == "sat") {
        verdict.kind = VerdictKind::Invalid;
        verdict.reason = UnknownReason::None;
        verdict.counterexample = decode_smt_model(pr.output, chi_alphabet(v));
        std::smatch m;
        if (!verdict.counterexample && attempt == 0 &&
            std::regex_search(pr.output, m, std::regex(R"(\(\(len (\d+)\)\))")) && std::stoi(m[1]) > cells &&
            std::stoi(m[1]) <= 4096) {
          cells = std::stoi(m[1]);
          continue;
        }
      } else if (pr.output.find("memory") != std::string::npos) {
        verdict.reason = UnknownReason::Memout;
      }
    }
    verdict.seconds = since(t0);
    return verdict;
  }
  return unknown(b, UnknownReason::SolverUnknown);
}

// Parses the example MONA prints for a satisfiable formula: one row per
// free second-order variable, one bit per position.
std::optional<Word> decode_mona_example(const std::string& out, const VerificationFormula& v) {
  const int prefix = std::max<int>(static_cast<int>(v.tag_count), 2);
  const auto alphabet = chi_alphabet(v);
  const auto at = out.find("satisfying example");
  if (at == std::string::npos) return std::nullopt;
  std::istringstream in(out.substr(at));
  std::map<Letter, std::string> rows;
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    std::string name, kind, bits;
    if (!(ls >> name >> kind >> bits) || kind != "X") continue;
    for (Letter c : alphabet)
      if (MonaPrinter::set_name(c) == name) rows[c] = bits;
  }
  if (rows.empty()) return std::nullopt;
  std::size_t length = 0;
  for (const auto& [c, bits] : rows) length = std::max(length, bits.size());
  Word w;
  for (std::size_t p = static_cast<std::size_t>(prefix); p < length; ++p) {
    std::optional<Letter> letter;
    for (const auto& [c, bits] : rows)
      if (p < bits.size() && bits[p] == '1') letter = c;
    if (!letter) return std::nullopt;
    w.push_back(*letter);
  }
  return w;
}

Verdict run_mona(const std::string& bin, const VerificationFormula& v, const SolverOptions& opts,
                 const std::atomic<bool>* cancel) {
  const auto t0 = Clock::now();
  TempFile file(emit_mona(v), ".mona");
  ProcessResult pr = run_process({bin, file.path}, opts.timeout, cancel);
  Verdict verdict = unknown(Backend::Mona, UnknownReason::SolverUnknown, pr.output);
  if (!pr.started || pr.exit_code == 127) verdict.reason = UnknownReason::SolverMissing;
  else if (pr.timed_out || pr.cancelled) verdict.reason = UnknownReason::Timeout;
  else if (pr.output.find("Formula is unsatisfiable") != std::string::npos) {
    verdict.kind = VerdictKind::Valid;
    verdict.reason = UnknownReason::None;
  } else if (pr.output.find("Formula is valid") != std::string::npos ||
             pr.output.find("satisfying example") != std::string::npos) {
    verdict.kind = VerdictKind::Invalid;
    verdict.reason = UnknownReason::None;
    verdict.counterexample = decode_mona_example(pr.output, v);
  }
  verdict.seconds = since(t0);
  return verdict;
}

Verdict run_bounded(const VerificationFormula& v, const SolverOptions& opts, const std::atomic<bool>* cancel) {
  const auto t0 = Clock::now();
  const auto alphabet = chi_alphabet(v);
  Verdict verdict;
  verdict.backend = Backend::Bounded;
  std::vector<Word> layer{Word{}};
  for (int len = 0; len <= opts.bounded_max_length; ++len) {
    for (const Word& w : layer) {
      if (cancel != nullptr && cancel->load()) return unknown(Backend::Bounded, UnknownReason::Timeout);
      if (fo::eval_formula(v.chi, w, v.tag_count)) {
        verdict.kind = VerdictKind::Invalid;
        verdict.counterexample = w;
        verdict.seconds = since(t0);
        return verdict;
      }
    }
    std::vector<Word> next;
    next.reserve(layer.size() * alphabet.size());
    for (const Word& w : layer)
      for (Letter c : alphabet) {
        next.push_back(w);
        next.back().push_back(c);
      }
    layer = std::move(next);
  }
  verdict.kind = VerdictKind::Valid;
  verdict.bounded_only = true;
  verdict.seconds = since(t0);
  return verdict;
}

}  // namespace

Verdict run_solver(Backend b, const VerificationFormula& v, const SolverOptions& opts,
                   const std::atomic<bool>* cancel) {
  if (b == Backend::Bounded) return run_bounded(v, opts, cancel);
  auto bin = solver_binary(b, opts);
  if (!bin) return unknown(b, UnknownReason::SolverMissing);
  if (b == Backend::Mona) return run_mona(*bin, v, opts, cancel);
  return run_smt(b, *bin, v, opts, cancel);
}

std::vector<Verdict> run_portfolio(const std::vector<Backend>& backends, const VerificationFormula& v,
                                   const SolverOptions& opts) {
  std::atomic<bool> cancel{false};
  std::mutex mu;
  std::vector<Verdict> done;
  std::optional<std::size_t> winner;
  std::vector<std::thread> workers;
  for (Backend b : backends) {
    workers.emplace_back([&, b] {
      Verdict r = run_solver(b, v, opts, &cancel);
      std::lock_guard lock(mu);
      // A run stopped because another one won is not reported as a timeout.
      if (winner && r.kind == VerdictKind::Unknown && r.reason == UnknownReason::Timeout) r.raw = "cancelled";
      done.push_back(std::move(r));
      const Verdict& last = done.back();
      const bool conclusive = last.kind == VerdictKind::Invalid || (last.kind == VerdictKind::Valid && !last.bounded_only);
      if (conclusive && !winner) {
        winner = done.size() - 1;
        cancel.store(true);
      }
    });
  }
  for (auto& t : workers) t.join();
  if (!winner) {
    for (std::size_t k = 0; k < done.size(); ++k)
      if (done[k].kind == VerdictKind::Valid) {
        winner = k;
        break;
      }
  }
  if (winner && *winner != 0) std::swap(done[0], done[*winner]);
  return done;
}

}  // namespace polycheck
