// Python bindings: parse, run, compile and verify from source text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polycheck/backends.hpp"
#include "polycheck/diagnostics.hpp"
#include "polycheck/frontend.hpp"
#include "polycheck/hl_interpreter.hpp"
#include "polycheck/interp.hpp"
#include "polycheck/pullback.hpp"
#include "polycheck/rewriter.hpp"
#include "polycheck/simple_fp.hpp"

namespace py = pybind11;
using namespace polycheck;

namespace {

hl::Program load(const std::string& source) { return typecheck_program(parse_program(source)); }

std::string signature_of(const std::string& source) { return signature(load(source).main_function()); }

std::string run(const std::string& source, const std::string& input, bool nested) {
  const auto v = eval_program(load(source), NestedWord::word(decode_utf8(input)));
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "True" : "False";
  return format(std::get<NestedWord>(v), nested ? OutputFormat::Nested : OutputFormat::Separated);
}

std::string simple(const std::string& source) { return sp::to_string(rewrite_to_simple(load(source)).simple); }

std::string interpretation(const std::string& source) {
  return to_string(compile_interpretation(rewrite_to_simple(load(source)).simple));
}

py::dict metrics(const std::string& source) {
  const hl::Program p = load(source);
  const sp::Program s = rewrite_to_simple(p).simple;
  const Interpretation f = compile_interpretation(s);
  py::dict d;
  d["fp_size"] = sp::metrics(p).size;
  d["simple_size"] = sp::metrics(s).size;
  d["interp_size"] = f.size();
  d["qrank"] = f.qrank();
  d["arity"] = f.max_arity();
  d["tags"] = f.tags.size();
  return d;
}

py::dict verify(const std::string& source, const std::string& pre, const std::string& post,
                const std::vector<std::string>& backends, double timeout, int max_length) {
  const hl::Program p = load(source);
  const Interpretation f = compile_interpretation(rewrite_to_simple(p).simple);
  const VerificationFormula v = build_chi(parse_spec(pre), f, parse_spec(post));
  std::vector<Backend> bs;
  for (const auto& name : backends) {
    const auto b = parse_backend(name);
    if (!b) throw py::value_error("unknown backend " + name);
    bs.push_back(*b);
  }
  SolverOptions opts;
  opts.timeout = timeout;
  opts.bounded_max_length = max_length;
  py::gil_scoped_release release;
  const auto verdicts = run_portfolio(bs, v, opts);
  py::gil_scoped_acquire acquire;
  const Verdict& w = verdicts.front();
  py::dict d;
  d["result"] = w.kind == VerdictKind::Valid ? "valid" : w.kind == VerdictKind::Invalid ? "invalid" : "unknown";
  d["backend"] = std::string(backend_name(w.backend));
  d["bounded_only"] = w.bounded_only;
  d["reason"] = std::string(reason_name(w.reason));
  if (w.counterexample) {
    d["counterexample"] = encode_utf8(*w.counterexample);
    d["replayed"] = fo::eval_formula(parse_spec(pre), *w.counterexample) &&
                    !fo::eval_formula(parse_spec(post), run_word(p, *w.counterexample));
  } else {
    d["counterexample"] = py::none();
  }
  d["chi_qrank"] = v.qrank;
  d["chi_size"] = v.size;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Verification of simple string-to-string programs";

  static py::exception<CompileError> error(m, "CompileError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const CompileError& e) {
      const std::string msg = std::string(category_name(e.category())) + ": " + e.what();
      PyErr_SetString(error.ptr(), msg.c_str());
    }
  });

  m.def("signature", &signature_of, py::arg("source"), "Type of the main function.");
  m.def("run", &run, py::arg("source"), py::arg("input"), py::arg("nested") = false,
        "Runs the program on a UTF-8 word.");
  m.def("simple", &simple, py::arg("source"), "The simple for-program, as text.");
  m.def("interpretation", &interpretation, py::arg("source"), "The compiled interpretation, as text.");
  m.def("metrics", &metrics, py::arg("source"));
  m.def("verify", &verify, py::arg("source"), py::arg("pre"), py::arg("post"),
        py::arg("backends") = std::vector<std::string>{"z3", "bounded"}, py::arg("timeout") = 5.0,
        py::arg("max_length") = 6, "Checks the Hoare triple {pre} program {post}.");
}
