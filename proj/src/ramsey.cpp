#include "omega/ramsey.hpp"

namespace omega {

TransitionMatrix word_image(const BuchiAutomaton& aut, const std::vector<Letter>& word) {
  if (aut.state_count() == 0) throw ValidationError("word_image needs at least one state");
  TransitionMatrix m = TransitionMatrix::identity(aut.state_count());
  for (Letter a : word) m = mat_mul(m, transition_matrix_of_letter(aut, a));
  return m;
}

RamseyFactorisation ramsey_factorize_lasso(const BuchiAutomaton& aut, const LassoWord& w) {
  validate_lasso(w, aut.alphabet());
  const TransitionMatrix period = word_image(aut, w.period);
  auto [m, k] = idempotent_power_of(period, [](const TransitionMatrix& a, const TransitionMatrix& b) {
    return mat_mul(a, b);
  });
  RamseyFactorisation r;
  r.prefix_type = mat_mul(word_image(aut, w.stem), m);
  r.loop_type = std::move(m);
  r.stem_len = w.stem.size();
  r.period_len = k * w.period.size();
  return r;
}

}  // namespace omega
