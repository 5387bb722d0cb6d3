#pragma once

#include "hillgts/kernel.hpp"

namespace hillgts {

struct BuildError : std::runtime_error {
  explicit BuildError(const std::string& what) : std::runtime_error(what) {}
};

// Forward derivation builders. Each takes its premise derivations plus the
// names appearing in the conclusion subject and computes the conclusion
// sequent (sigma is recomputed from the linear context). They fail fast with
// BuildError on structural misuse; `check` remains the authority.

ProofPtr lid(Context gamma, const std::string& u, FormulaPtr alpha);
ProofPtr uid(Context gamma, const std::string& x);
ProofPtr one_r(Context gamma);

// let nil = u in N, consuming u :: one.
ProofPtr one_l(ProofPtr p, const std::string& u);

ProofPtr tens_r(ProofPtr left, ProofPtr right);

// let u * v = w in N, replacing u :: a, v :: b by w :: a * b.
ProofPtr tens_l(ProofPtr p, const std::string& u, const std::string& v,
                const std::string& w);

// llam u. M, moving u :: a out of the premise's linear context.
ProofPtr lolli_r(ProofPtr p, const std::string& u);

// let u = v ^ M in N; `arg` proves M :: a, `rest` consumes u :: b, and the
// conclusion consumes v :: a -o b.
ProofPtr lolli_l(ProofPtr arg, ProofPtr rest, const std::string& u,
                 const std::string& v);

// lam x. M, moving x :: b out of the premise's non-linear context.
ProofPtr all_r(ProofPtr p, const std::string& x);

// let v = u D in N; `witness` proves D :: b with an empty linear context,
// `rest` consumes v :: a[D/x], and the conclusion consumes u :: univ where
// univ = all x:b. a.
ProofPtr all_l(ProofPtr witness, ProofPtr rest, const std::string& u,
               const std::string& v, FormulaPtr univ);

// eps(D|n). M packaging the hidden witness D at the fresh location n.
// `witness` proves D :: b, `identity` proves a -o a under x :: b, `main`
// proves the instantiated body; premises ordered (witness, identity, main).
ProofPtr ex_r(ProofPtr witness, ProofPtr identity, ProofPtr main,
              const std::string& x, const std::string& n);

// let eps(z|n). v = u in N, folding z :: b, n :: b @ z and v back into
// u :: ex z:b. <type of v>.
ProofPtr ex_l(ProofPtr p, const std::string& u, const std::string& z,
              const std::string& n, const std::string& v);

ProofPtr bang_r(ProofPtr p);

// let !x = u in N, moving the closed hypothesis into the non-linear context.
ProofPtr bang_l(ProofPtr p, const std::string& u, const std::string& x);

// discard <names of dropped> in N, adding `dropped` to the non-linear context.
ProofPtr weak(ProofPtr p, Context dropped);

// let u = copy(x) in N, absorbing the linear copy u of the non-linear x.
ProofPtr contr(ProofPtr p, const std::string& x, const std::string& u);

// let u = N in M.
ProofPtr cut(ProofPtr left, ProofPtr right, const std::string& u);

// let x = D in M with D non-linear; substitutes D through the conclusion.
ProofPtr bang_cut(ProofPtr d, ProofPtr m, const std::string& x);

// Derivation of gamma ; u :: alpha |- N :: alpha by eta-expansion on the
// shape of alpha. Quantifier domains must be closed; located types have no
// identity derivation.
ProofPtr id_seq(const Context& gamma, const std::string& u, const FormulaPtr& alpha);

// Derivation of gamma ; . |- N :: alpha -o alpha.
ProofPtr id_proof(const Context& gamma, const FormulaPtr& alpha);

}  // namespace hillgts
