#include "polycheck/hl_interpreter.hpp"

#include <cassert>
#include <memory>
#include <stdexcept>

namespace polycheck {

using namespace hl;

NestedWord NestedWord::character(Letter c) {
  NestedWord v;
  v.is_char = true;
  v.ch = c;
  return v;
}

NestedWord NestedWord::list(std::vector<NestedWord> items, int depth) {
  NestedWord v;
  v.items = std::move(items);
  v.depth = depth;
  return v;
}

NestedWord NestedWord::word(const Word& w) {
  std::vector<NestedWord> items;
  items.reserve(w.size());
  for (Letter c : w) items.push_back(character(c));
  return list(std::move(items), 1);
}

NestedWord NestedWord::from_const(const CExpr& c) {
  if (c.is_char) return character(c.ch);
  std::vector<NestedWord> items;
  for (const auto& it : c.items) items.push_back(from_const(it));
  return list(std::move(items), c.depth);
}

Word NestedWord::to_word() const {
  if (is_char || depth != 1) throw std::logic_error("value is not a word");
  Word w;
  for (const auto& it : items) w.push_back(it.ch);
  return w;
}

std::string format(const NestedWord& v, OutputFormat style) {
  if (v.is_char) return style == OutputFormat::Nested ? quote_letter(v.ch) : encode_utf8(v.ch);
  if (v.depth == 1) return style == OutputFormat::Nested ? quote_word(v.to_word()) : encode_utf8(v.to_word());
  std::string sep = style == OutputFormat::Nested ? ", " : std::string(static_cast<std::size_t>(v.depth - 1), '#');
  std::string s = style == OutputFormat::Nested ? "[" : "";
  for (std::size_t i = 0; i < v.items.size(); ++i) {
    if (i) s += sep;
    s += format(v.items[i], style);
  }
  if (style == OutputFormat::Nested) s += "]";
  return s;
}

namespace {

using Shared = std::shared_ptr<const NestedWord>;

struct Slot {
  enum Kind { List, Pos, Bool } kind;
  Shared list;
  int pos = 0;
  bool flag = false;
  bool hidden = false;
};

struct Frame {
  ReturnType ret;
  std::vector<NestedWord> out;
  bool returned = false;
  Value result;
};

class Interpreter {
 public:
  explicit Interpreter(const Program& p) : prog_(p) {}

  Value call(const Function& fn, std::vector<Slot> args) {
    std::vector<std::pair<std::string, Slot>> saved;
    saved.swap(env_);
    std::size_t k = 0;
    for (const Param& prm : fn.params) {
      Slot list = args.at(k++);
      env_.emplace_back(prm.name, list);
      for (const auto& pos : prm.positions) env_.emplace_back(pos, args.at(k++));
    }
    Value v = run_body(fn.body, fn.ret);
    env_.swap(saved);
    return v;
  }

 private:
  Value run_body(const Stmt& body, const ReturnType& ret) {
    Frame frame{ret, {}, false, false};
    Frame* outer = frame_;
    frame_ = &frame;
    exec(body);
    frame_ = outer;
    if (frame.returned) return frame.result;
    if (ret.is_bool) return false;
    if (ret.depth == 0) throw CompileError(ErrorCategory::Runtime, body.span, "character function ended without return");
    return NestedWord::list(std::move(frame.out), ret.depth);
  }

  Slot* lookup(const std::string& n) {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == n && !it->second.hidden) return &it->second;
    throw std::logic_error("interpreter: unbound name " + n);
  }

  template <class F>
  auto with_hidden_booleans(F&& body) {
    std::vector<std::size_t> hid;
    for (std::size_t i = 0; i < env_.size(); ++i)
      if (env_[i].second.kind == Slot::Bool && !env_[i].second.hidden) {
        env_[i].second.hidden = true;
        hid.push_back(i);
      }
    auto result = body();
    for (std::size_t i : hid) env_[i].second.hidden = false;
    return result;
  }

  std::vector<Slot> eval_args(const std::vector<Arg>& args) {
    std::vector<Slot> out;
    for (const auto& a : args) {
      out.push_back(Slot{Slot::List, std::make_shared<const NestedWord>(eval(*a.expr)), 0, false, false});
      for (const auto& pos : a.positions) out.push_back(*lookup(pos));
    }
    return out;
  }

  NestedWord eval(const OExpr& e) {
    return std::visit(
        [&](const auto& n) -> NestedWord {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, o::Var>) {
            return *lookup(n.name)->list;
          } else if constexpr (std::is_same_v<T, o::Const>) {
            return NestedWord::from_const(n.value);
          } else if constexpr (std::is_same_v<T, o::List>) {
            std::vector<NestedWord> items;
            for (const auto& it : n.items) items.push_back(eval(it));
            int d = items.empty() ? 1 : items.front().depth + 1;
            return NestedWord::list(std::move(items), d);
          } else if constexpr (std::is_same_v<T, o::Call>) {
            auto args = eval_args(n.args);
            const Function* fn = prog_.find(n.fn);
            if (!fn) throw std::logic_error("interpreter: unknown function " + n.fn);
            return std::get<NestedWord>(call(*fn, std::move(args)));
          } else {
            ReturnType ret{false, e.depth};
            if (e.depth < 0) throw std::logic_error("interpreter: untyped generator");
            return std::get<NestedWord>(with_hidden_booleans([&] { return run_body(*n.body, ret); }));
          }
        },
        e.node);
  }

  bool test(const BExpr& e) {
    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, b::Lit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, b::Var>) {
            return lookup(n.name)->flag;
          } else if constexpr (std::is_same_v<T, b::Not>) {
            return !test(*n.operand);
          } else if constexpr (std::is_same_v<T, b::Bin>) {
            switch (n.op) {
              case BoolOp::And: return test(*n.lhs) && test(*n.rhs);
              case BoolOp::Or: return test(*n.lhs) || test(*n.rhs);
              case BoolOp::Implies: return !test(*n.lhs) || test(*n.rhs);
              case BoolOp::Iff: return test(*n.lhs) == test(*n.rhs);
            }
            return false;
          } else if constexpr (std::is_same_v<T, b::PosCmp>) {
            int l = lookup(n.lhs)->pos;
            int r = lookup(n.rhs)->pos;
            switch (n.op) {
              case CmpOp::Eq: return l == r;
              case CmpOp::Ne: return l != r;
              case CmpOp::Lt: return l < r;
              case CmpOp::Le: return l <= r;
              case CmpOp::Gt: return l > r;
              case CmpOp::Ge: return l >= r;
            }
            return false;
          } else if constexpr (std::is_same_v<T, b::Call>) {
            auto args = eval_args(n.args);
            const Function* fn = prog_.find(n.fn);
            if (!fn) throw std::logic_error("interpreter: unknown function " + n.fn);
            return std::get<bool>(call(*fn, std::move(args)));
          } else if constexpr (std::is_same_v<T, b::LitEq>) {
            return eval(*n.lhs) == eval(*n.rhs);
          } else {
            return std::get<bool>(with_hidden_booleans([&] { return run_body(*n.body, ReturnType{true, 0}); }));
          }
        },
        e.node);
  }

  void exec(const Stmt& st) {
    if (frame_->returned) return;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, s::Seq>) {
            for (const auto& it : n.items) {
              exec(it);
              if (frame_->returned) return;
            }
          } else if constexpr (std::is_same_v<T, s::If>) {
            exec(test(n.cond) ? *n.then_branch : *n.else_branch);
          } else if constexpr (std::is_same_v<T, s::Yield>) {
            frame_->out.push_back(eval(n.value));
          } else if constexpr (std::is_same_v<T, s::ReturnOut>) {
            NestedWord v = eval(n.value);
            if (frame_->ret.depth == 0) {
              frame_->result = std::move(v);
            } else {
              std::vector<NestedWord> all = std::move(frame_->out);
              all.insert(all.end(), v.items.begin(), v.items.end());
              frame_->result = NestedWord::list(std::move(all), frame_->ret.depth);
            }
            frame_->returned = true;
          } else if constexpr (std::is_same_v<T, s::ReturnBool>) {
            frame_->result = test(n.value);
            frame_->returned = true;
          } else if constexpr (std::is_same_v<T, s::LetOut>) {
            auto v = std::make_shared<const NestedWord>(eval(n.value));
            env_.emplace_back(n.name, Slot{Slot::List, std::move(v), 0, false, false});
            exec(*n.body);
            env_.pop_back();
          } else if constexpr (std::is_same_v<T, s::LetBool>) {
            env_.emplace_back(n.name, Slot{Slot::Bool, nullptr, 0, false, false});
            exec(*n.body);
            env_.pop_back();
          } else if constexpr (std::is_same_v<T, s::SetTrue>) {
            Slot* slot = lookup(n.name);
            assert(slot->kind == Slot::Bool);
            slot->flag = true;  // booleans only ever move from false to true
          } else if constexpr (std::is_same_v<T, s::For>) {
            auto v = std::make_shared<const NestedWord>(eval(n.iter));
            const int len = static_cast<int>(v->items.size());
            env_.emplace_back(n.pos, Slot{Slot::Pos, nullptr, 0, false, false});
            env_.emplace_back(n.elem, Slot{Slot::List, nullptr, 0, false, false});
            const std::size_t pos_slot = env_.size() - 2;
            for (int k = 0; k < len && !frame_->returned; ++k) {
              const int idx = n.dir == Direction::Forward ? k : len - 1 - k;
              env_[pos_slot].second.pos = idx;
              env_[pos_slot + 1].second.list = std::make_shared<const NestedWord>(v->items[static_cast<std::size_t>(idx)]);
              exec(*n.body);
            }
            env_.pop_back();
            env_.pop_back();
          }
        },
        st.node);
  }

  const Program& prog_;
  std::vector<std::pair<std::string, Slot>> env_;
  Frame* frame_ = nullptr;
};

void collect(const Stmt& st, std::set<Letter>& out);

void collect(const CExpr& c, std::set<Letter>& out) {
  if (c.is_char) out.insert(c.ch);
  for (const auto& it : c.items) collect(it, out);
}

void collect(const OExpr& e, std::set<Letter>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, o::Const>) {
          collect(n.value, out);
        } else if constexpr (std::is_same_v<T, o::List>) {
          for (const auto& it : n.items) collect(it, out);
        } else if constexpr (std::is_same_v<T, o::Call>) {
          for (const auto& a : n.args) collect(*a.expr, out);
        } else if constexpr (std::is_same_v<T, o::Gen>) {
          collect(*n.body, out);
        }
      },
      e.node);
}

void collect(const BExpr& e, std::set<Letter>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, b::Not>) {
          collect(*n.operand, out);
        } else if constexpr (std::is_same_v<T, b::Bin>) {
          collect(*n.lhs, out);
          collect(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, b::Call>) {
          for (const auto& a : n.args) collect(*a.expr, out);
        } else if constexpr (std::is_same_v<T, b::LitEq>) {
          collect(*n.lhs, out);
          collect(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, b::Gen>) {
          collect(*n.body, out);
        }
      },
      e.node);
}

void collect(const Stmt& st, std::set<Letter>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, s::Seq>) {
          for (const auto& it : n.items) collect(it, out);
        } else if constexpr (std::is_same_v<T, s::If>) {
          collect(n.cond, out);
          collect(*n.then_branch, out);
          collect(*n.else_branch, out);
        } else if constexpr (std::is_same_v<T, s::Yield> || std::is_same_v<T, s::ReturnOut>) {
          collect(n.value, out);
        } else if constexpr (std::is_same_v<T, s::ReturnBool>) {
          collect(n.value, out);
        } else if constexpr (std::is_same_v<T, s::LetOut>) {
          collect(n.value, out);
          collect(*n.body, out);
        } else if constexpr (std::is_same_v<T, s::LetBool>) {
          collect(*n.body, out);
        } else if constexpr (std::is_same_v<T, s::For>) {
          collect(n.iter, out);
          collect(*n.body, out);
        }
      },
      st.node);
}

}  // namespace

Value eval_program(const Program& p, const NestedWord& input) {
  const Function& main = p.main_function();
  if (main.params.size() != 1 || !main.params.front().positions.empty())
    throw std::invalid_argument("main must take exactly one list argument");
  if (main.params.front().depth != input.depth)
    throw std::invalid_argument("input depth does not match the parameter of '" + main.name + "'");
  Interpreter interp(p);
  std::vector<Slot> args{Slot{Slot::List, std::make_shared<const NestedWord>(input), 0, false, false}};
  return interp.call(main, std::move(args));
}

Word run_word(const Program& p, const Word& input) {
  Value v = eval_program(p, NestedWord::word(input));
  return std::get<NestedWord>(v).to_word();
}

std::set<Letter> support_constants(const Program& p) {
  std::set<Letter> out;
  for (const auto& f : p.functions) collect(f.body, out);
  return out;
}

}  // namespace polycheck
