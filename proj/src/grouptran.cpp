#include "charsum/grouptran.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace charsum {

FiniteGroup::FiniteGroup(std::vector<std::vector<uint16_t>> table, std::string name)
    : table_(std::move(table)), name_(std::move(name)) {
  size_t n = table_.size();
  if (n == 0 || n > 0xFFFF) throw Error("group size out of range");
  for (const auto& row : table_)
    if (row.size() != n) throw Error("multiplication table is not square");
  // locate identity
  id_ = 0xFFFF;
  for (uint16_t e = 0; e < n; ++e) {
    bool ok = true;
    for (uint16_t a = 0; a < n && ok; ++a) ok = table_[e][a] == a && table_[a][e] == a;
    if (ok) {
      id_ = e;
      break;
    }
  }
  if (id_ == 0xFFFF) throw Error("group has no identity element");
  inv_.assign(n, 0xFFFF);
  for (uint16_t a = 0; a < n; ++a) {
    for (uint16_t b = 0; b < n; ++b)
      if (table_[a][b] == id_ && table_[b][a] == id_) {
        inv_[a] = b;
        break;
      }
    if (inv_[a] == 0xFFFF) throw Error("group element without inverse");
  }
}

void FiniteGroup::check_axioms() const {
  uint16_t n = size();
  for (uint16_t a = 0; a < n; ++a)
    for (uint16_t b = 0; b < n; ++b)
      for (uint16_t c = 0; c < n; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw Error("group is not associative");
}

uint16_t FiniteGroup::pow(uint16_t a, uint64_t e) const {
  uint16_t r = id_, b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

std::shared_ptr<const FiniteGroup> FiniteGroup::from_table(std::vector<std::vector<uint16_t>> table,
                                                           std::string name) {
  auto g = std::shared_ptr<const FiniteGroup>(new FiniteGroup(std::move(table), std::move(name)));
  g->check_axioms();
  return g;
}

std::shared_ptr<const FiniteGroup> FiniteGroup::cyclic(uint32_t n) {
  if (n < 1) throw Error("cyclic group order must be >= 1");
  std::vector<std::vector<uint16_t>> t(n, std::vector<uint16_t>(n));
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b) t[a][b] = uint16_t((a + b) % n);
  return from_table(std::move(t), "cyclic:" + std::to_string(n));
}

std::shared_ptr<const FiniteGroup> FiniteGroup::dihedral(uint32_t n) {
  if (n < 1) throw Error("dihedral parameter must be >= 1");
  // elements: r^a (ids 0..n-1), s*r^a (ids n..2n-1); s*r^a * s*r^b = r^{b-a}
  uint32_t m = 2 * n;
  auto enc = [n](bool flip, uint32_t rot) { return uint16_t((flip ? n : 0) + rot % n); };
  std::vector<std::vector<uint16_t>> t(m, std::vector<uint16_t>(m));
  for (uint32_t a = 0; a < m; ++a)
    for (uint32_t b = 0; b < m; ++b) {
      bool fa = a >= n, fb = b >= n;
      uint32_t ra = a % n, rb = b % n;
      // (s^fa r^ra)(s^fb r^rb) = s^{fa+fb} r^{(fb ? -ra : ra) + rb}
      uint32_t rot = fb ? (n - ra) % n + rb : ra + rb;
      t[a][b] = enc(fa != fb, rot);
    }
  return from_table(std::move(t), "dihedral:" + std::to_string(n));
}

std::shared_ptr<const FiniteGroup> FiniteGroup::symmetric(uint32_t n) {
  if (n < 1 || n > 5) throw Error("symmetric group parameter out of range");
  std::vector<std::vector<uint8_t>> perms;
  std::vector<uint8_t> base(n);
  std::iota(base.begin(), base.end(), 0);
  std::vector<uint8_t> cur = base;
  do {
    perms.push_back(cur);
  } while (std::next_permutation(cur.begin(), cur.end()));
  // identity is the first permutation in lexicographic order
  std::map<std::vector<uint8_t>, uint16_t> id_of;
  for (uint16_t i = 0; i < perms.size(); ++i) id_of[perms[i]] = i;
  size_t m = perms.size();
  std::vector<std::vector<uint16_t>> t(m, std::vector<uint16_t>(m));
  for (size_t a = 0; a < m; ++a)
    for (size_t b = 0; b < m; ++b) {
      std::vector<uint8_t> c(n);
      for (uint32_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];  // (ab)(i) = a(b(i))
      t[a][b] = id_of[c];
    }
  return from_table(std::move(t), "symmetric:" + std::to_string(n));
}

std::shared_ptr<const FiniteGroup> FiniteGroup::parse_descriptor(const std::string& desc) {
  size_t colon = desc.find(':');
  if (colon == std::string::npos) throw Error("bad group descriptor: " + desc);
  std::string kind = desc.substr(0, colon);
  uint32_t n = uint32_t(std::stoul(desc.substr(colon + 1)));
  if (kind == "cyclic") return cyclic(n);
  if (kind == "dihedral") return dihedral(n);
  if (kind == "symmetric") return symmetric(n);
  throw Error("unknown group kind: " + kind);
}

// --- Subgroup ---

Subgroup::Subgroup(GroupPtr G, std::vector<uint16_t> members) : G_(std::move(G)), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  uint16_t n = G_->size();
  member_mask_.assign(n, false);
  for (auto m : members_) {
    if (m >= n) throw Error("subgroup member out of range");
    member_mask_[m] = true;
  }
  if (members_.empty() || !member_mask_[G_->identity()]) throw Error("subgroup must contain the identity");
  for (auto a : members_)
    for (auto b : members_)
      if (!member_mask_[G_->mul(a, b)]) throw Error("subgroup not closed under multiplication");
  for (auto a : members_)
    if (!member_mask_[G_->inv(a)]) throw Error("subgroup not closed under inverse");
  if (G_->size() % members_.size() != 0) throw Error("subgroup order does not divide group order");

  coset_of_.assign(n, 0xFFFF);
  for (uint16_t g = 0; g < n; ++g) {
    if (coset_of_[g] != 0xFFFF) continue;
    uint16_t idx = uint16_t(reps_.size());
    reps_.push_back(g);
    for (auto h : members_) coset_of_[G_->mul(h, g)] = idx;
  }
}

std::vector<uint16_t> Subgroup::coset_members(uint16_t i) const {
  std::vector<uint16_t> out;
  for (uint16_t g = 0; g < G_->size(); ++g)
    if (coset_of_[g] == i) out.push_back(g);
  return out;
}

bool Subgroup::is_normal() const {
  for (uint16_t g = 0; g < G_->size(); ++g)
    for (auto h : members_)
      if (!member_mask_[G_->mul(G_->mul(g, h), G_->inv(g))]) return false;
  return true;
}

std::vector<std::vector<uint16_t>> all_subgroups(const GroupPtr& G) {
  uint16_t n = G->size();
  auto closure = [&](std::vector<uint16_t> gens) {
    std::vector<bool> in(n, false);
    std::vector<uint16_t> elems;
    auto push = [&](uint16_t x) {
      if (!in[x]) {
        in[x] = true;
        elems.push_back(x);
      }
    };
    push(G->identity());
    for (auto g : gens) push(g);
    for (size_t i = 0; i < elems.size(); ++i)
      for (size_t j = 0; j < elems.size(); ++j) push(G->mul(elems[i], elems[j]));
    std::sort(elems.begin(), elems.end());
    return elems;
  };

  std::set<std::vector<uint16_t>> found;
  std::vector<std::vector<uint16_t>> queue;
  auto trivial = closure({});
  found.insert(trivial);
  queue.push_back(trivial);
  while (!queue.empty()) {
    auto h = queue.back();
    queue.pop_back();
    std::vector<bool> in(n, false);
    for (auto x : h) in[x] = true;
    for (uint16_t g = 0; g < n; ++g) {
      if (in[g]) continue;
      auto gens = h;
      gens.push_back(g);
      auto bigger = closure(gens);
      if (found.insert(bigger).second) queue.push_back(bigger);
    }
  }
  return std::vector<std::vector<uint16_t>>(found.begin(), found.end());
}

// --- Abelianization ---

Abelianization::Abelianization(const Subgroup& H) : G_(H.group().get()) {
  // commutator subgroup of H: subgroup generated by all [a,b], a,b in H
  uint16_t n = G_->size();
  std::vector<bool> in(n, false);
  std::vector<uint16_t> elems;
  auto push = [&](uint16_t x) {
    if (!in[x]) {
      in[x] = true;
      elems.push_back(x);
    }
  };
  push(G_->identity());
  for (auto a : H.members())
    for (auto b : H.members())
      push(G_->mul(G_->mul(G_->inv(a), G_->inv(b)), G_->mul(a, b)));
  for (size_t i = 0; i < elems.size(); ++i)
    for (size_t j = 0; j < elems.size(); ++j) push(G_->mul(elems[i], elems[j]));
  comm_ = elems;
  std::sort(comm_.begin(), comm_.end());

  class_of_.assign(n, -1);
  for (auto h : H.members()) {
    if (class_of_[h] != -1) continue;
    uint16_t cls = uint16_t(class_reps_.size());
    // class = h * comm (left coset inside H); canonical rep = smallest member
    uint16_t rep = h;
    std::vector<uint16_t> cls_members;
    for (auto c : comm_) {
      uint16_t x = G_->mul(h, c);
      cls_members.push_back(x);
      rep = std::min(rep, x);
    }
    class_reps_.push_back(rep);
    for (auto x : cls_members) class_of_[x] = cls;
  }
  // relabel so the canonical reps are the stored ones (first encounter
  // already scans members ascending, so rep == smallest == first member).
  id_class_ = uint16_t(class_of_[G_->identity()]);
}

uint16_t Abelianization::class_of(uint16_t member) const {
  if (member >= class_of_.size() || class_of_[member] < 0)
    throw Error("element outside the abelianized subgroup");
  return uint16_t(class_of_[member]);
}

uint16_t Abelianization::mul(uint16_t class_a, uint16_t class_b) const {
  return class_of(G_->mul(class_reps_[class_a], class_reps_[class_b]));
}

// --- transfer ---

uint16_t transfer_class(const Subgroup& H, const Abelianization& ab,
                        const std::vector<uint16_t>& reps, uint16_t g) {
  const FiniteGroup& G = *H.group();
  if (reps.size() != H.index()) throw Error("wrong number of coset representatives");
  // map coset id -> chosen representative, validating the system
  std::vector<uint16_t> rep_of(H.index(), 0xFFFF);
  for (auto r : reps) {
    uint16_t c = H.coset_of(r);
    if (rep_of[c] != 0xFFFF) throw Error("two representatives in one coset");
    rep_of[c] = r;
  }
  uint16_t acc = ab.identity_class();
  for (uint16_t i = 0; i < H.index(); ++i) {
    uint16_t gi = rep_of[i];
    uint16_t gig = G.mul(gi, g);
    uint16_t tau_i = H.coset_of(gig);
    uint16_t factor = G.mul(gig, G.inv(rep_of[tau_i]));
    if (!H.contains(factor)) throw Error("transfer factor escaped the subgroup (internal)");
    acc = ab.mul(acc, ab.class_of(factor));
  }
  return acc;
}

uint16_t transfer_map(const Subgroup& H, uint16_t g) {
  Abelianization ab(H);
  return ab.class_rep(transfer_class(H, ab, H.reps(), g));
}

// --- law verification ---

TransferLawReport verify_transfer_laws(const GroupPtr& G, const std::vector<uint16_t>& h_members,
                                       uint64_t max_rep_systems) {
  TransferLawReport rep;
  Subgroup H(G, h_members);
  Abelianization abH(H);
  uint16_t n = G->size();
  uint32_t d = H.index();

  auto fail = [&](const std::string& msg) { rep.failures.push_back(msg); };

  // canonical transfer of every element
  std::vector<uint16_t> tran(n);
  for (uint16_t g = 0; g < n; ++g) tran[g] = transfer_class(H, abH, H.reps(), g);

  // (a) representative independence across all (or sampled) systems
  std::vector<std::vector<uint16_t>> cosets(d);
  uint64_t total = 1;
  const uint64_t total_cap = uint64_t(1) << 40;
  for (uint16_t i = 0; i < d; ++i) {
    cosets[i] = H.coset_members(i);
    uint64_t sz = cosets[i].size();
    total = (total > total_cap / sz) ? total_cap : total * sz;
  }
  rep.rep_systems_total = total;
  uint64_t samples = std::min<uint64_t>(total, max_rep_systems);
  uint64_t stride = total <= max_rep_systems ? 1 : total / samples;
  for (uint64_t s = 0; s < samples; ++s) {
    uint64_t code = s * stride;
    std::vector<uint16_t> reps(d);
    for (uint16_t i = 0; i < d; ++i) {
      reps[i] = cosets[i][code % cosets[i].size()];
      code /= cosets[i].size();
    }
    for (uint16_t g = 0; g < n; ++g) {
      if (transfer_class(H, abH, reps, g) != tran[g]) {
        rep.rep_independent = false;
        fail("representative dependence at g=" + std::to_string(g));
      }
    }
    ++rep.rep_systems_checked;
  }

  // (b) homomorphism
  for (uint16_t a = 0; a < n; ++a)
    for (uint16_t b = 0; b < n; ++b)
      if (tran[G->mul(a, b)] != abH.mul(tran[a], tran[b])) {
        rep.homomorphism = false;
        fail("transfer not multiplicative at (" + std::to_string(a) + "," + std::to_string(b) + ")");
      }

  // (c) inclusion composed with transfer = g -> g^d in G^ab
  Subgroup whole(G, [&] {
    std::vector<uint16_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }());
  Abelianization abG(whole);
  for (uint16_t g = 0; g < n; ++g) {
    uint16_t lhs = abG.class_of(abH.class_rep(tran[g]));
    uint16_t rhs = abG.class_of(G->pow(g, d));
    if (lhs != rhs) {
      rep.power_law = false;
      fail("power law fails at g=" + std::to_string(g));
    }
  }

  rep.h_normal = H.is_normal();

  // (d) normal case: tran(h) = prod g_i h g_i^{-1}
  if (rep.h_normal) {
    for (auto h : H.members()) {
      uint16_t acc = abH.identity_class();
      for (auto gi : H.reps()) {
        uint16_t conj = G->mul(G->mul(gi, h), G->inv(gi));
        if (!H.contains(conj)) throw Error("conjugate escaped a normal subgroup (internal)");
        acc = abH.mul(acc, abH.class_of(conj));
      }
      if (acc != tran[h]) {
        rep.conjugate_law = false;
        fail("conjugate product law fails at h=" + std::to_string(h));
      }
    }

    // quotient structure: cyclic iff some coset has order d
    auto coset_pow = [&](uint16_t g) {
      uint32_t ord = 1;
      uint16_t cur = g;
      while (!H.contains(cur)) {
        cur = G->mul(cur, g);
        ++ord;
      }
      return ord;
    };
    for (uint16_t g = 0; g < n && !rep.quotient_cyclic; ++g)
      if (coset_pow(g) == d) rep.quotient_cyclic = true;

    // (e) cyclic case: tran(sigma) = sigma^d for every generator class
    if (rep.quotient_cyclic) {
      for (uint16_t g = 0; g < n; ++g) {
        if (coset_pow(g) != d) continue;
        uint16_t sd = G->pow(g, d);
        if (!H.contains(sd)) throw Error("sigma^d escaped the subgroup (internal)");
        if (tran[g] != abH.class_of(sd)) {
          rep.cyclic_law = false;
          fail("cyclic quotient law fails at sigma=" + std::to_string(g));
        }
      }
    }
  }

  return rep;
}

}  // namespace charsum
