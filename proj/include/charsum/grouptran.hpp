#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "charsum/ffield.hpp"

namespace charsum {

/// Finite group given by its multiplication table. Element ids are
/// 0..n-1 with 0 the identity for the built-in constructors.
class FiniteGroup {
 public:
  static std::shared_ptr<const FiniteGroup> cyclic(uint32_t n);
  static std::shared_ptr<const FiniteGroup> dihedral(uint32_t n);   // order 2n
  static std::shared_ptr<const FiniteGroup> symmetric(uint32_t n);  // order n!
  static std::shared_ptr<const FiniteGroup> from_table(std::vector<std::vector<uint16_t>> table,
                                                       std::string name);
  /// `cyclic:n`, `dihedral:n`, `symmetric:n`.
  static std::shared_ptr<const FiniteGroup> parse_descriptor(const std::string& desc);

  uint16_t size() const { return uint16_t(table_.size()); }
  uint16_t identity() const { return id_; }
  uint16_t mul(uint16_t a, uint16_t b) const { return table_[a][b]; }
  uint16_t inv(uint16_t a) const { return inv_[a]; }
  uint16_t pow(uint16_t a, uint64_t e) const;
  const std::string& name() const { return name_; }

  /// Exhaustive associativity/identity/inverse check; throws on failure.
  void check_axioms() const;

 private:
  FiniteGroup(std::vector<std::vector<uint16_t>> table, std::string name);
  std::vector<std::vector<uint16_t>> table_;
  std::vector<uint16_t> inv_;
  uint16_t id_;
  std::string name_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Subgroup with the canonical right-coset decomposition: cosets Hg are
/// scanned in element order, so each canonical representative is the
/// smallest element of its coset.
class Subgroup {
 public:
  Subgroup(GroupPtr G, std::vector<uint16_t> members);

  const GroupPtr& group() const { return G_; }
  const std::vector<uint16_t>& members() const { return members_; }
  uint32_t order() const { return uint32_t(members_.size()); }
  uint32_t index() const { return uint32_t(reps_.size()); }
  const std::vector<uint16_t>& reps() const { return reps_; }
  bool contains(uint16_t g) const { return member_mask_[g]; }
  /// Index of the right coset Hg containing g.
  uint16_t coset_of(uint16_t g) const { return coset_of_[g]; }
  /// All elements of the i-th right coset, ascending.
  std::vector<uint16_t> coset_members(uint16_t i) const;
  bool is_normal() const;

 private:
  GroupPtr G_;
  std::vector<uint16_t> members_;
  std::vector<bool> member_mask_;
  std::vector<uint16_t> reps_;
  std::vector<uint16_t> coset_of_;
};

/// All subgroups (member sets, each sorted ascending), found by closure
/// saturation; deterministic order.
std::vector<std::vector<uint16_t>> all_subgroups(const GroupPtr& G);

/// Quotient of a subgroup by its commutator subgroup. Classes are labeled
/// by their smallest member.
class Abelianization {
 public:
  explicit Abelianization(const Subgroup& H);

  uint16_t class_of(uint16_t member) const;  // member must lie in H
  uint16_t mul(uint16_t class_a, uint16_t class_b) const;
  uint16_t identity_class() const { return id_class_; }
  uint16_t num_classes() const { return uint16_t(class_reps_.size()); }
  uint16_t class_rep(uint16_t cls) const { return class_reps_[cls]; }
  const std::vector<uint16_t>& commutator_subgroup() const { return comm_; }

 private:
  const FiniteGroup* G_;
  std::vector<uint16_t> comm_;
  std::vector<int32_t> class_of_;  // element id -> class id, -1 outside H
  std::vector<uint16_t> class_reps_;
  uint16_t id_class_;
};

/// The transfer of g through H with an explicit system of right-coset
/// representatives: the class of prod_i g_i g g_{tau(i)}^{-1} in H^ab,
/// where H g_i g = H g_{tau(i)}. Returns the class id in `ab`.
uint16_t transfer_class(const Subgroup& H, const Abelianization& ab,
                        const std::vector<uint16_t>& reps, uint16_t g);

/// Same with the canonical representatives; returns the smallest element
/// of the resulting class.
uint16_t transfer_map(const Subgroup& H, uint16_t g);

struct TransferLawReport {
  bool rep_independent = true;
  bool homomorphism = true;
  bool power_law = true;          // inclusion after transfer = g -> g^d in G^ab
  bool conjugate_law = true;      // normal case product formula
  bool cyclic_law = true;         // tran(sigma) = sigma^d for generators of G/H
  bool h_normal = false;
  bool quotient_cyclic = false;
  uint64_t rep_systems_total = 0;
  uint64_t rep_systems_checked = 0;
  std::vector<std::string> failures;

  bool all_ok() const {
    return rep_independent && homomorphism && power_law && conjugate_law && cyclic_law;
  }
};

TransferLawReport verify_transfer_laws(const GroupPtr& G, const std::vector<uint16_t>& h_members,
                                       uint64_t max_rep_systems = 256);

}  // namespace charsum
