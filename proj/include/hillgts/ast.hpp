#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hillgts {

struct Term;
struct Formula;
struct Pattern;
using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;
using PatternPtr = std::shared_ptr<const Pattern>;

// Let-binding patterns. In `let P = M in N` the variables of P bind in N.
struct Pattern {
  enum class Kind { Var, Nil, Tensor, Eps, Bang, Copy };
  Kind kind;
  std::string name;  // Var; Copy source; Eps witness variable
  std::string loc;   // Eps location variable
  PatternPtr a, b;   // Tensor children; Eps/Bang body in a
};

PatternPtr p_var(std::string name);
PatternPtr p_nil();
PatternPtr p_tensor(PatternPtr a, PatternPtr b);
PatternPtr p_eps(std::string witness, std::string loc, PatternPtr body);
PatternPtr p_bang(PatternPtr body);
PatternPtr p_copy(std::string name);

// Bound variables of a pattern, in left-to-right order.
std::vector<std::string> pattern_vars(const PatternPtr& p);

// Proof terms. `eps(D|n). M` packages a witness D stored at location n with
// body M; it binds nothing. `let` binds its pattern's variables in the body.
struct Term {
  enum class Kind {
    Var,      // name
    Nil,
    Tensor,   // a, b
    Eps,      // witness a, location `loc`, body b
    Lam,      // binder `var`, body a
    LinLam,   // binder `var`, body a
    App,      // function a, non-linear argument b
    LinApp,   // function a, linear argument b
    Bang,     // a
    Discard,  // names `discard_vars`, body a
    Copy,     // source `var`
    Let,      // pattern `pat`, bound a, body b
  };
  Kind kind;
  std::string var;
  std::string loc;
  TermPtr a, b;
  std::vector<std::string> discard_vars;
  PatternPtr pat;
};

TermPtr t_var(std::string name);
TermPtr t_nil();
TermPtr t_tensor(TermPtr a, TermPtr b);
TermPtr t_eps(TermPtr witness, std::string loc, TermPtr body);
TermPtr t_lam(std::string binder, TermPtr body);
TermPtr t_llam(std::string binder, TermPtr body);
TermPtr t_app(TermPtr f, TermPtr arg);
TermPtr t_linapp(TermPtr f, TermPtr arg);
TermPtr t_bang(TermPtr body);
TermPtr t_discard(std::vector<std::string> vars, TermPtr body);
TermPtr t_copy(std::string source);
TermPtr t_let(PatternPtr pat, TermPtr bound, TermPtr body);

// Formulas. Edge predicates carry term arguments, optionally annotated with
// a closed type. Quantifiers bind `name` (domain in a, body in b); `Loc` is
// the located type `a @ naming`.
struct Formula {
  enum class Kind { Atom, Edge, One, Tensor, Lolli, Bang, Forall, Ex, Loc };

  struct EdgeArg {
    TermPtr term;
    FormulaPtr annot;  // may be null
  };

  Kind kind;
  std::string name;  // Atom/Edge label; quantifier binder
  std::vector<EdgeArg> args;
  FormulaPtr a, b;
  TermPtr naming;
};

FormulaPtr f_atom(std::string name);
FormulaPtr f_edge(std::string label, std::vector<Formula::EdgeArg> args);
FormulaPtr f_one();
FormulaPtr f_tensor(FormulaPtr a, FormulaPtr b);
FormulaPtr f_lolli(FormulaPtr a, FormulaPtr b);
FormulaPtr f_bang(FormulaPtr a);
FormulaPtr f_forall(std::string binder, FormulaPtr domain, FormulaPtr body);
FormulaPtr f_ex(std::string binder, FormulaPtr domain, FormulaPtr body);
FormulaPtr f_loc(FormulaPtr body, TermPtr naming);

// Right-nested tensor of the factors; `one` when empty.
FormulaPtr tensor_of(const std::vector<FormulaPtr>& factors);

// Free variables (terms and formulas; quantifiers, lambdas and let patterns
// bind, eps does not).
std::set<std::string> free_vars(const TermPtr& t);
std::set<std::string> free_vars(const FormulaPtr& f);
bool is_closed(const FormulaPtr& f);

// Number of free occurrences of `name`; an eps location slot counts as one.
std::size_t count_free_uses(const TermPtr& t, const std::string& name);

// Syntactic non-linear term shapes: variables and banged terms.
bool is_nonlinear_shape(const TermPtr& t);

bool alpha_eq(const TermPtr& a, const TermPtr& b);
bool alpha_eq(const FormulaPtr& a, const FormulaPtr& b);

// Deterministic fresh-name source. Prefers the hint when unused.
struct NameGen {
  std::set<std::string> taken;
  std::map<std::string, int> counters;

  void reserve(const std::string& n) { taken.insert(n); }
  void reserve_all(const std::set<std::string>& ns) { taken.insert(ns.begin(), ns.end()); }
  std::string fresh(const std::string& hint);
};

// Capture-avoiding substitution of terms for free variables.
TermPtr substitute(const TermPtr& t, const std::map<std::string, TermPtr>& sub);
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& sub);
TermPtr substitute(const TermPtr& t, const std::string& var, const TermPtr& image);
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& image);

struct DesugarError : std::runtime_error {
  explicit DesugarError(const std::string& what) : std::runtime_error(what) {}
};

// `let P = M in N` as the substitution N[M/P]: matches M against P and
// substitutes the bindings into N. Throws DesugarError on shape mismatch or
// when a variable bound by a non-replicable pattern position would be used
// more than once in N.
TermPtr desugar_let(const PatternPtr& pat, const TermPtr& bound, const TermPtr& body);

// Typing contexts and sequents.
struct CtxEntry {
  std::string name;
  FormulaPtr type;
};
using Context = std::vector<CtxEntry>;

const FormulaPtr* ctx_lookup(const Context& c, const std::string& name);
bool ctx_has(const Context& c, const std::string& name);
Context ctx_remove(const Context& c, const std::string& name);

struct Sequent {
  std::vector<std::string> sigma;  // sorted, duplicate-free
  Context gamma, delta;
  TermPtr subject;  // null for proof-search goals
  FormulaPtr goal;
};

std::vector<std::string> sorted_unique(std::vector<std::string> v);

// Union of the free variables of the naming terms of location entries in
// delta. No separation checking here.
std::set<std::string> free_nominal_vars(const Context& delta);

// Graph formulas: the one/tensor/ex/forall/loc/edge fragment where all
// quantifier and location domains are node types (!A).
bool is_node_type(const FormulaPtr& f);
bool is_graph_formula(const FormulaPtr& f);

struct NormalForm {
  std::vector<std::pair<std::string, FormulaPtr>> prefix;  // ex binders
  std::vector<FormulaPtr> factors;                         // edge atoms; empty = one
  bool closed = false;
};

// Leading ex-prefix over a body that is `one` or a tensor of edge atoms with
// variable arguments.
std::optional<NormalForm> normal_form(const FormulaPtr& f);

}  // namespace hillgts
