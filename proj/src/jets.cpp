#include "critpt/jets.hpp"

#include <algorithm>
#include <mutex>

namespace critpt {

namespace {

void enumerate_rec(int m, int dmax, std::vector<int>& cur, int var, int left,
                   std::vector<std::vector<int>>& out) {
  if (var == m) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= left; ++k) {
    cur[var] = k;
    enumerate_rec(m, dmax, cur, var + 1, left - k, out);
  }
  cur[var] = 0;
}

}  // namespace

MultiIndexSet::MultiIndexSet(int m, int dmax) : m_(m), dmax_(dmax) {
  assert(m >= 1 && dmax >= 0);
  std::vector<std::vector<int>> all;
  std::vector<int> cur(m, 0);
  enumerate_rec(m, dmax, cur, 0, dmax, all);
  std::stable_sort(all.begin(), all.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     int da = 0, db = 0;
                     for (int x : a) da += x;
                     for (int x : b) db += x;
                     if (da != db) return da < db;
                     return a < b;
                   });
  list_ = std::move(all);
  degrees_.resize(list_.size());
  for (size_t i = 0; i < list_.size(); ++i) {
    int d = 0;
    for (int x : list_[i]) d += x;
    degrees_[i] = d;
    pos_[list_[i]] = static_cast<int>(i);
  }
}

int MultiIndexSet::id(const std::vector<int>& e) const {
  auto it = pos_.find(e);
  return it == pos_.end() ? -1 : it->second;
}

int MultiIndexSet::id_plus(int id, int j) const {
  std::vector<int> e = list_[id];
  e[j] += 1;
  return this->id(e);
}

const MultiIndexSet& MultiIndexSet::get(int m, int dmax) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, MultiIndexSet> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(m, dmax);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, MultiIndexSet(m, dmax)).first;
  return it->second;
}

DiagJetTable::DiagJetTable(int m, int order_z, int order_w)
    : m_(m), oz_(order_z), ow_(order_w) {
  nz_ = MultiIndexSet::get(m, oz_).size();
  nw_ = MultiIndexSet::get(m, ow_).size();
  vals_.assign(static_cast<size_t>(nz_) * nw_, cplx(0.0, 0.0));
}

cplx DiagJetTable::value(const std::vector<int>& a,
                         const std::vector<int>& b) const {
  int ia = zside().id(a), ib = wside().id(b);
  if (ia < 0 || ib < 0)
    throw std::out_of_range("jet entry outside stored orders");
  return at(ia, ib);
}

double DiagJetTable::hermitian_defect() const {
  assert(oz_ == ow_);
  double worst = 0.0;
  for (int ia = 0; ia < nz_; ++ia)
    for (int ib = 0; ib < nw_; ++ib) {
      cplx d = at(ia, ib) - std::conj(at(ib, ia));
      worst = std::max(worst, std::abs(d) / (1.0 + std::abs(at(ia, ib))));
    }
  return worst;
}

void DiagJetTable::scale(double c) {
  for (auto& v : vals_) v *= c;
}

namespace {

// Expansion coefficients of d^a (h * G) in terms of d^{a'} G for |a| <= 2,
// given h(z0) = 1 and the derivative values h1, h2 of h at z0.
// Returns list of (source id, coefficient) for a given target id.
std::vector<std::pair<int, cplx>> product_rule_row(
    const MultiIndexSet& side, int target, const Eigen::VectorXcd& h1,
    const Eigen::MatrixXcd& h2) {
  const std::vector<int>& e = side.exps(target);
  int deg = side.degree(target);
  std::vector<std::pair<int, cplx>> row;
  if (deg == 0) {
    row.emplace_back(target, cplx(1.0));
  } else if (deg == 1) {
    int j = 0;
    while (e[j] == 0) ++j;
    row.emplace_back(target, cplx(1.0));
    row.emplace_back(0, h1(j));
  } else {  // deg == 2: indices j <= q with e = e_j + e_q
    int j = -1, q = -1;
    for (int k = 0; k < side.vars(); ++k) {
      for (int c = 0; c < e[k]; ++c) {
        if (j < 0)
          j = k;
        else
          q = k;
      }
    }
    std::vector<int> ej(side.vars(), 0), eq(side.vars(), 0);
    ej[j] = 1;
    eq[q] = 1;
    row.emplace_back(target, cplx(1.0));
    row.emplace_back(side.id(ej), h1(q));
    row.emplace_back(side.id(eq), h1(j));
    // d_j d_q h as a derivative value (not a Taylor coefficient)
    row.emplace_back(0, h2(j, q));
    if (j == q) {
      // e_j appears twice above; collapse duplicate source ids
      std::vector<std::pair<int, cplx>> merged;
      for (auto& [src, c] : row) {
        bool found = false;
        for (auto& [s2, c2] : merged)
          if (s2 == src) {
            c2 += c;
            found = true;
          }
        if (!found) merged.emplace_back(src, c);
      }
      row = std::move(merged);
    }
  }
  return row;
}

}  // namespace

DiagJetTable DiagJetTable::frame_transformed(const Eigen::VectorXcd& h1,
                                             const Eigen::MatrixXcd& h2) const {
  if (oz_ > 2 || ow_ > 2)
    throw std::invalid_argument("frame transform supports orders <= 2");
  const MultiIndexSet& zs = zside();
  const MultiIndexSet& ws = wside();
  DiagJetTable out(m_, oz_, ow_);
  Eigen::VectorXcd h1c = h1.conjugate();
  Eigen::MatrixXcd h2c = h2.conjugate();
  for (int ia = 0; ia < nz_; ++ia) {
    auto zrow = product_rule_row(zs, ia, h1, h2);
    for (int ib = 0; ib < nw_; ++ib) {
      auto wrow = product_rule_row(ws, ib, h1c, h2c);
      cplx acc(0.0);
      for (auto& [sa, ca] : zrow)
        for (auto& [sb, cb] : wrow) acc += ca * cb * at(sa, sb);
      out.at(ia, ib) = acc;
    }
  }
  return out;
}

DiagJetTable DiagJetTable::coordinates_transformed(
    const Eigen::MatrixXcd& L) const {
  if (oz_ > 2 || ow_ > 2)
    throw std::invalid_argument("coordinate transform supports orders <= 2");
  const MultiIndexSet& zs = zside();
  const MultiIndexSet& ws = wside();
  Eigen::MatrixXcd Lc = L.conjugate();

  // contraction row: d^target_zeta = sum over source z-indices
  auto chain_row = [this](const MultiIndexSet& side, int target,
                          const Eigen::MatrixXcd& M) {
    const std::vector<int>& e = side.exps(target);
    int deg = side.degree(target);
    std::vector<std::pair<int, cplx>> row;
    if (deg == 0) {
      row.emplace_back(0, cplx(1.0));
    } else if (deg == 1) {
      int i = 0;
      while (e[i] == 0) ++i;
      for (int k = 0; k < m_; ++k) {
        std::vector<int> ek(m_, 0);
        ek[k] = 1;
        row.emplace_back(side.id(ek), M(k, i));
      }
    } else {
      int i = -1, j = -1;
      for (int k = 0; k < m_; ++k)
        for (int c = 0; c < e[k]; ++c) (i < 0 ? i : j) = k;
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l) {
          std::vector<int> ekl(m_, 0);
          ekl[k] += 1;
          ekl[l] += 1;
          int src = side.id(ekl);
          cplx coeff = M(k, i) * M(l, j);
          bool found = false;
          for (auto& [s, c] : row)
            if (s == src) {
              c += coeff;
              found = true;
            }
          if (!found) row.emplace_back(src, coeff);
        }
    }
    return row;
  };

  DiagJetTable out(m_, oz_, ow_);
  for (int ia = 0; ia < nz_; ++ia) {
    auto zrow = chain_row(zs, ia, L);
    for (int ib = 0; ib < nw_; ++ib) {
      auto wrow = chain_row(ws, ib, Lc);
      cplx acc(0.0);
      for (auto& [sa, ca] : zrow)
        for (auto& [sb, cb] : wrow) acc += ca * cb * at(sa, sb);
      out.at(ia, ib) = acc;
    }
  }
  return out;
}

}  // namespace critpt
