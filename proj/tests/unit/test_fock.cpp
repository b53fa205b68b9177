#include <doctest.h>

#include <cmath>
#include <map>

#include "qvir/fock.hpp"

using namespace qvir;

namespace {

// Oracle: [h_n, h_{-n}] from the closed form, and vacuum expectation values
// of mode words by repeated swapping.
cplx kappa_formula(int n, const QParams& P) {
  const double h = n / 2.0;
  return (P.q_pow(h) - P.q_pow(-h)) * (P.t_pow(h) - P.t_pow(-h)) / (static_cast<double>(n) * (P.p_pow(h) + P.p_pow(-h)));
}

cplx vev(std::vector<int> word, const QParams& P) {
  if (word.empty()) return 1.0;
  if (word.back() > 0 || word.front() < 0) return 0.0;
  std::size_t i = word.size() - 1;
  while (word[i] < 0) --i;
  cplx out = 0.0;
  if (word[i] == -word[i + 1]) {
    std::vector<int> rest(word.begin(), word.begin() + i);
    rest.insert(rest.end(), word.begin() + i + 2, word.end());
    out += kappa_formula(word[i], P) * vev(rest, P);
  }
  std::swap(word[i], word[i + 1]);
  return out + vev(word, P);
}

std::vector<int> bra_word(const Partition& p) { return {p.parts().rbegin(), p.parts().rend()}; }

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("partition counts") {
  const int p[] = {1, 1, 2, 3, 5, 7, 11, 15};
  for (int n = 0; n < 8; ++n) CHECK(partitions_of(n).size() == static_cast<std::size_t>(p[n]));
}

TEST_CASE("mode commutator is the closed form and antisymmetric") {
  const QParams P = QParams::make(0.7, 0.3);
  for (int n = 1; n <= 5; ++n) {
    CHECK(std::abs(mode_commutator(n, -n, P) - kappa_formula(n, P)) < 1e-14);
    CHECK(std::abs(mode_commutator(-n, n, P) + kappa_formula(n, P)) < 1e-14);
    CHECK(mode_commutator(n, 1 - n, P) == cplx(0.0));
  }
}

TEST_CASE("Gram matrices match word reordering up to degree 6") {
  for (auto [q, t] : {std::pair{0.7, 0.3}, std::pair{0.4, 0.9}}) {
    const QParams P = QParams::make(q, t);
    const FockSpace fock(P, 6);
    for (int d = 0; d <= 6; ++d) {
      const auto& basis = fock.basis(d);
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
          std::vector<int> w = bra_word(basis[i]);
          for (int part : basis[j].parts()) w.push_back(-part);
          const cplx want = vev(w, P);
          const cplx got = inner_product({0.0, basis[i]}, {0.0, basis[j]}, fock);
          const double scale = std::sqrt(std::abs(fock.norm(basis[i]) * fock.norm(basis[j])));
          CHECK(std::abs(got - want) / scale < 1e-12);
        }
    }
    CHECK(check_gram(P, 6).pass());
  }
}

TEST_CASE("library reordering oracle agrees with the test oracle") {
  const QParams P = QParams::make(0.4, 0.9);
  const Eigen::MatrixXcd g = gram_by_reordering(P, 4);
  const auto basis = partitions_of(4);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      std::vector<int> w = bra_word(basis[i]);
      for (int part : basis[j].parts()) w.push_back(-part);
      CHECK(std::abs(g(i, j) - vev(w, P)) < 1e-14 * std::max(1.0, std::abs(g(i, j))));
    }
}

TEST_CASE("inner product separates momentum sectors") {
  const QParams P = QParams::make(0.7, 0.3);
  const FockSpace fock(P, 3);
  const Partition lam({2, 1});
  CHECK(inner_product({0.37, lam}, {0.0, lam}, fock) == cplx(0.0));
  CHECK(inner_product({0.37, lam}, {0.37, lam}, fock) == fock.norm(lam));
}

TEST_CASE("exp_block matches the expanded exponentials") {
  const QParams P = QParams::make(0.7, 0.3);
  const FockSpace fock(P, 6);
  const std::vector<cplx> a = {0.3, -0.2, 0.15};
  const std::vector<cplx> b = {0.5, 0.1, -0.25};
  auto weight = [](const Partition& nu, const std::vector<cplx>& c) {
    cplx w = 1.0;
    for (int n = 1; n <= 3; ++n) {
      const int m = nu.multiplicity(n);
      w *= std::pow(c[n - 1], m) / factorial(m);
    }
    for (int part : nu.parts())
      if (part > 3) return cplx(0.0);
    return w;
  };
  for (int db = 0; db <= 3; ++db)
    for (int dk = 0; dk <= 3; ++dk) {
      const Eigen::MatrixXcd blk = fock.exp_block(a, b, db, dk);
      const auto& bras = fock.basis(db);
      const auto& kets = fock.basis(dk);
      for (std::size_t i = 0; i < bras.size(); ++i)
        for (std::size_t j = 0; j < kets.size(); ++j) {
          cplx want = 0.0;
          for (int s = 0; s <= db; ++s)
            for (const Partition& cre : partitions_of(s))
              for (int u = 0; u <= dk; ++u)
                for (const Partition& ann : partitions_of(u)) {
                  const cplx wt = weight(cre, b) * weight(ann, a);
                  if (wt == cplx(0.0)) continue;
                  std::vector<int> w = bra_word(bras[i]);
                  for (int n : cre.parts()) w.push_back(-n);
                  for (int n : ann.parts()) w.push_back(n);
                  for (int n : kets[j].parts()) w.push_back(-n);
                  want += wt * vev(w, P);
                }
          const double scale = std::sqrt(std::abs(fock.norm(bras[i]) * fock.norm(kets[j])));
          CHECK(std::abs(blk(i, j) - want) / scale < 1e-12);
        }
    }
}
