#pragma once

// Dirichlet characters mod q: CRT construction from generators of (Z/q)^*,
// exact root-of-unity value arithmetic, conductors, primitive induction, and
// the large-conductor families F_q / G_q used by the synchronization
// experiment.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace primevar::characters {

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FamilyTooSmall : std::runtime_error {
  FamilyTooSmall(std::uint64_t q, std::size_t have, std::size_t need)
      : std::runtime_error("family too small at q=" + std::to_string(q) +
                           ": |F_q|=" + std::to_string(have) + " < phi/2=" +
                           std::to_string(need)),
        q(q) {}
  std::uint64_t q;
};

// One cyclic component of (Z/q)^* under the CRT decomposition.
struct Component {
  std::uint64_t pe;        // prime power it came from
  std::uint64_t gen;       // lifted generator, = 1 mod all other factors
  std::uint64_t order;
  std::vector<std::int32_t> dlog;  // index in <gen> of n mod pe (or of the 3-part at p=2)
  bool is_sign = false;    // the {+-1} component at 2^e, e >= 3 (order 2)
};

class CharacterGroup {
 public:
  static std::shared_ptr<const CharacterGroup> get(std::uint64_t q);

  std::uint64_t q() const { return q_; }
  std::uint64_t phi() const { return phi_; }
  const std::vector<Component>& components() const { return comps_; }
  std::uint64_t num_characters() const { return phi_; }

  // component exponent vector of n; false if gcd(n, q) > 1
  bool index(std::uint64_t n, std::vector<std::uint32_t>& out) const;

 private:
  explicit CharacterGroup(std::uint64_t q);
  std::uint64_t q_ = 1, phi_ = 1;
  std::vector<Component> comps_;
};

class DirichletCharacter {
 public:
  DirichletCharacter() = default;
  DirichletCharacter(std::shared_ptr<const CharacterGroup> g,
                     std::vector<std::uint32_t> exps);

  std::uint64_t q() const { return group_->q(); }
  std::uint64_t label() const { return label_; }
  bool is_principal() const;
  int parity() const;               // kappa: chi(-1) = (-1)^kappa
  std::uint64_t conductor() const;  // cached

  std::complex<double> operator()(std::uint64_t n) const;
  // chi(n) = e^{2 pi i num/den}; nullopt when gcd(n, q) > 1
  std::optional<std::pair<std::int64_t, std::int64_t>> angle(
      std::uint64_t n) const;

  DirichletCharacter conjugate() const;
  // dense complex value table indexed by n mod q (size q)
  std::vector<std::complex<double>> value_table() const;

  const CharacterGroup& group() const { return *group_; }
  const std::vector<std::uint32_t>& exponents() const { return exps_; }

 private:
  std::shared_ptr<const CharacterGroup> group_;
  std::vector<std::uint32_t> exps_;
  std::uint64_t label_ = 0;
  mutable std::uint64_t conductor_ = 0;  // 0 = not yet computed
};

// All phi(q) characters mod q, ordered by label (principal first).
std::vector<DirichletCharacter> character_group(std::uint64_t q);
DirichletCharacter character_by_label(std::uint64_t q, std::uint64_t label);

std::uint64_t conductor(const DirichletCharacter& chi);

// Lift chi* (mod d) to the character mod q it induces; d | q required.
DirichletCharacter induce(const DirichletCharacter& chi_star, std::uint64_t q);
// The primitive character mod conductor(chi) inducing chi.
DirichletCharacter primitive_inducer(const DirichletCharacter& chi);

struct CharacterFamily {
  std::uint64_t Q = 0;
  double g_target = 0.0;
  std::vector<std::uint64_t> moduli;                       // D_Q
  std::map<std::uint64_t, std::vector<DirichletCharacter>> members;  // G_q
  std::map<std::uint64_t, std::size_t> f_size;             // |F_q|
  double e_value = 0.0;  // sum over members of (log q - log q_chi)
  std::size_t total_members() const;
};

// F_q = {chi : log q_chi > log q - (log log q)^2}; requires |F_q| >= phi(q)/2,
// then keeps the first floor(g_target |F_q| / log q) by label as G_q.
CharacterFamily select_family(std::uint64_t Q, double g_target,
                              const std::vector<std::uint64_t>& moduli);

}  // namespace primevar::characters
