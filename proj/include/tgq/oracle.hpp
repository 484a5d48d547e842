#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tgq/errors.hpp"
#include "tgq/numeric.hpp"
#include "tgq/signature.hpp"
#include "tgq/triangle.hpp"

namespace tgq {

struct IntegerMatrix {
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<Int> data;  // row-major

  IntegerMatrix() = default;
  IntegerMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  Int& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Int& at(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols; ++j) std::swap(at(a, j), at(b, j));
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows; ++i) std::swap(at(i, a), at(i, b));
  }

  // row[dst] += k * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Int& k) {
    for (std::size_t j = 0; j < cols; ++j) at(dst, j) += k * at(src, j);
  }

  // col[dst] += k * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Int& k) {
    for (std::size_t i = 0; i < rows; ++i) at(i, dst) += k * at(i, src);
  }

  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols; ++j) at(r, j) = -at(r, j);
  }

  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;
};

inline IntegerMatrix matrix_product(const IntegerMatrix& a,
                                    const IntegerMatrix& b) {
  if (a.cols != b.rows) throw InconsistentData("matrix product shape mismatch");
  IntegerMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

// Smith normal form row_transform * M * col_transform = diag(d1, d2, ...)
// with d1 | d2 | ... and trailing zeros for the free part.  The column
// transform is what lattice-membership queries need: a row vector v lies in
// the row lattice of M iff every coordinate of v * col_transform is divisible
// by the matching diagonal entry (zero entries demanding exact zero).
struct SnfResult {
  std::vector<Int> diagonal;  // min(rows, cols) entries
  std::size_t generator_count{0};
  bool has_col_transform{false};
  bool has_row_transform{false};
  IntegerMatrix row_transform;
  IntegerMatrix col_transform;

  std::size_t rank() const {
    std::size_t r = 0;
    for (const auto& d : diagonal)
      if (d != 0) ++r;
    return r;
  }

  // Nonzero diagonal entries > 1, i.e. the torsion of the cokernel.
  std::vector<Int> invariant_factors() const {
    std::vector<Int> out;
    for (const auto& d : diagonal)
      if (d > 1) out.push_back(d);
    return out;
  }

  std::size_t free_rank() const { return generator_count - rank(); }

  Int torsion_order() const {
    Int n = 1;
    for (const auto& d : diagonal)
      if (d != 0) n *= d;
    return n;
  }
};

// Classical reduction pivoting on the least nonzero absolute value.  Entries
// are unbounded so no modular tricks are needed at the sizes handled here.
// The column transform serves lattice-membership queries; the row transform
// is only built when asked for.
inline SnfResult snf(const IntegerMatrix& m, bool with_col_transform = false,
                     bool with_row_transform = false) {
  IntegerMatrix d = m;
  SnfResult res;
  res.generator_count = m.cols;
  res.has_col_transform = with_col_transform;
  res.has_row_transform = with_row_transform;
  if (with_col_transform) res.col_transform = IntegerMatrix::identity(m.cols);
  if (with_row_transform) res.row_transform = IntegerMatrix::identity(m.rows);
  IntegerMatrix& u = res.row_transform;
  IntegerMatrix& v = res.col_transform;

  std::size_t nmin = std::min(m.rows, m.cols);
  for (std::size_t t = 0; t < nmin; ++t) {
    for (;;) {
      // Move the least nonzero |entry| of the trailing block to (t, t).
      bool found = false;
      std::size_t pi = t, pj = t;
      Int best;
      for (std::size_t i = t; i < d.rows && !(found && best == 1); ++i)
        for (std::size_t j = t; j < d.cols; ++j) {
          if (d.at(i, j) == 0) continue;
          Int a = abs(d.at(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            pi = i;
            pj = j;
            if (best == 1) break;
          }
        }
      if (!found) goto finished;
      d.swap_rows(t, pi);
      if (with_row_transform) u.swap_rows(t, pi);
      d.swap_cols(t, pj);
      if (with_col_transform) v.swap_cols(t, pj);

      bool residue = false;
      for (std::size_t i = t + 1; i < d.rows; ++i) {
        if (d.at(i, t) == 0) continue;
        Int q = d.at(i, t) / d.at(t, t);
        if (q != 0) {
          d.add_row_multiple(i, t, -q);
          if (with_row_transform) u.add_row_multiple(i, t, -q);
        }
        if (d.at(i, t) != 0) residue = true;
      }
      if (residue) continue;
      for (std::size_t j = t + 1; j < d.cols; ++j) {
        if (d.at(t, j) == 0) continue;
        Int q = d.at(t, j) / d.at(t, t);
        if (q != 0) {
          d.add_col_multiple(j, t, -q);
          if (with_col_transform) v.add_col_multiple(j, t, -q);
        }
        if (d.at(t, j) != 0) residue = true;
      }
      if (residue) continue;

      // The pivot is lone; force it into every remaining entry's divisor.
      bool divides_all = true;
      for (std::size_t i = t + 1; i < d.rows && divides_all; ++i)
        for (std::size_t j = t + 1; j < d.cols; ++j)
          if (!divides(d.at(t, t), d.at(i, j))) {
            d.add_row_multiple(t, i, Int(1));
            if (with_row_transform) u.add_row_multiple(t, i, Int(1));
            divides_all = false;
            break;
          }
      if (divides_all) break;
    }
    if (d.at(t, t) < 0) {
      d.negate_row(t);
      if (with_row_transform) u.negate_row(t);
    }
  }
finished:
  res.diagonal.resize(nmin);
  for (std::size_t t = 0; t < nmin; ++t) res.diagonal[t] = d.at(t, t);
  return res;
}

namespace detail {

inline std::vector<Int> transformed_coordinates(const SnfResult& s,
                                                const std::vector<Int>& v) {
  if (!s.has_col_transform)
    throw InconsistentData("lattice query needs the column transform");
  if (v.size() != s.generator_count)
    throw InconsistentData("lattice query vector has wrong length");
  const IntegerMatrix& t = s.col_transform;
  std::vector<Int> w(t.cols);
  for (std::size_t i = 0; i < t.rows; ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < t.cols; ++j) w[j] += v[i] * t.at(i, j);
  }
  return w;
}

inline Int diagonal_at(const SnfResult& s, std::size_t j) {
  return j < s.diagonal.size() ? s.diagonal[j] : Int(0);
}

}  // namespace detail

// Is v an integer combination of the rows handed to snf()?
inline bool lattice_contains(const SnfResult& s, const std::vector<Int>& v) {
  std::vector<Int> w = detail::transformed_coordinates(s, v);
  for (std::size_t j = 0; j < w.size(); ++j) {
    Int dj = detail::diagonal_at(s, j);
    if (dj == 0 ? w[j] != 0 : !divides(dj, w[j])) return false;
  }
  return true;
}

// Least k >= 1 with k*v in the row lattice; 0 encodes an infinite order.
inline Int order_in_cokernel(const SnfResult& s, const std::vector<Int>& v) {
  std::vector<Int> w = detail::transformed_coordinates(s, v);
  Int order = 1;
  for (std::size_t j = 0; j < w.size(); ++j) {
    Int dj = detail::diagonal_at(s, j);
    if (dj == 0) {
      if (w[j] != 0) return 0;
      continue;
    }
    order = lcm(order, dj / gcd(dj, w[j]));
  }
  return order;
}

struct FpAbelianisation {
  std::size_t generator_count{0};
  std::vector<Int> invariant_factors;  // > 1, ascending divisibility
  std::size_t free_rank{0};
  std::vector<Int> generator_orders;  // image order per generator; 0 = infinite
  SnfResult snf;                      // keeps transforms for further queries
};

// Cokernel of the relation matrix, with the image order of every standard
// generator.
inline FpAbelianisation fp_abelianisation(
    std::size_t generator_count,
    const std::vector<std::vector<Int>>& relation_rows) {
  IntegerMatrix m(relation_rows.size(), generator_count);
  for (std::size_t i = 0; i < relation_rows.size(); ++i) {
    if (relation_rows[i].size() != generator_count)
      throw InconsistentData("relation row " + std::to_string(i) +
                             " has wrong length");
    for (std::size_t j = 0; j < generator_count; ++j)
      m.at(i, j) = relation_rows[i][j];
  }
  FpAbelianisation out;
  out.generator_count = generator_count;
  out.snf = snf(m, true, false);
  out.invariant_factors = out.snf.invariant_factors();
  out.free_rank = out.snf.free_rank();
  out.generator_orders.reserve(generator_count);
  std::vector<Int> unit(generator_count, Int(0));
  for (std::size_t i = 0; i < generator_count; ++i) {
    unit[i] = 1;
    out.generator_orders.push_back(order_in_cokernel(out.snf, unit));
    unit[i] = 0;
  }
  return out;
}

// Relation rows of the triangle group on the two generators x, y:
// x^p, y^q and (xy)^r abelianize to (p, 0), (0, q) and (r, r).
inline std::vector<std::vector<Int>> triangle_relation_rows(
    const TriangleParams& t) {
  validate(t);
  return {{t.p, Int(0)}, {Int(0), t.q}, {t.r, t.r}};
}

inline constexpr std::size_t kDefaultMaxLatticeColumns = 1024;

// Elliptic relation lattice of a signature: one generator per elliptic
// period entry, relations m_j * x_ji plus the long-relation row summing all
// elliptic generators (the hyperbolic generators abelianize freely and never
// enter a relation, so they are accounted for separately as free rank 2g).
// With modulus > 0 the lattice gains modulus * e_i for every generator; the
// pair {m_j e_i, modulus e_i} generates the same lattice as gcd(m_j, modulus)
// e_i, so the diagonal rows carry the gcd directly.
struct SignatureLattice {
  IntegerMatrix matrix;
  std::vector<std::size_t> class_offset;  // first column of each period class
};

inline SignatureLattice signature_relation_lattice(
    const FuchsianSignature& sig, const Int& modulus = Int(0),
    std::size_t max_columns = kDefaultMaxLatticeColumns) {
  Int total = sig.elliptic_count();
  if (total > Int(static_cast<unsigned long>(max_columns)))
    throw TowerTooLarge("signature has " + total.get_str() +
                        " elliptic generators, above the lattice guard of " +
                        std::to_string(max_columns));
  std::size_t k = total.get_ui();
  SignatureLattice lat;
  lat.matrix = IntegerMatrix(k + 1, k);
  std::size_t col = 0;
  for (const auto& pc : sig.period_classes()) {
    lat.class_offset.push_back(col);
    Int entry = modulus > 0 ? gcd(pc.period, modulus) : pc.period;
    unsigned long n = to_ulong_checked(pc.multiplicity, "class multiplicity");
    for (unsigned long i = 0; i < n; ++i, ++col)
      lat.matrix.at(col, col) = entry;
  }
  for (std::size_t j = 0; j < k; ++j) lat.matrix.at(k, j) = 1;
  return lat;
}

struct CycleCheckReport {
  Int order;                        // degree of the regular representation
  std::array<Int, 3> image_orders;  // element orders of the generator images
  std::array<Int, 3> cycle_counts;  // order / image_order, all cycles equal
};

namespace detail {

inline std::vector<unsigned long> cokernel_coordinates(
    const SnfResult& s, const std::vector<Int>& v,
    const std::vector<unsigned long>& moduli,
    const std::vector<std::size_t>& torsion_cols) {
  std::vector<Int> w = transformed_coordinates(s, v);
  std::vector<unsigned long> coords(torsion_cols.size());
  for (std::size_t i = 0; i < torsion_cols.size(); ++i) {
    Int c;
    Int d(moduli[i]);
    mpz_mod(c.get_mpz_t(), w[torsion_cols[i]].get_mpz_t(), d.get_mpz_t());
    coords[i] = c.get_ui();
  }
  return coords;
}

}  // namespace detail

// Builds the abelian quotient explicitly from its invariant factors, maps the
// three canonical generators into it, computes their element orders by
// iterated addition, and counts the cycles of the translation action on the
// full group.  Everything is compared against the closed forms; a mismatch is
// a build-stopping defect.
inline CycleCheckReport cycle_check(const TriangleParams& t,
                                    unsigned long max_degree = 1000000) {
  AbelianisationReport ab = abelianisation(t);
  FpAbelianisation fp = fp_abelianisation(2, triangle_relation_rows(t));
  if (fp.free_rank != 0)
    throw MismatchDetected("triangle abelianisation came out infinite");

  std::vector<std::size_t> torsion_cols;
  std::vector<unsigned long> moduli;
  Int order(1);
  for (std::size_t j = 0; j < fp.snf.diagonal.size(); ++j) {
    if (fp.snf.diagonal[j] > 1) {
      torsion_cols.push_back(j);
      moduli.push_back(to_ulong_checked(fp.snf.diagonal[j], "factor"));
      order *= fp.snf.diagonal[j];
    }
  }
  if (order != ab.order)
    throw MismatchDetected("lattice order " + order.get_str() +
                           " != closed-form order " + ab.order.get_str());
  unsigned long degree = to_ulong_checked(order, "representation degree");
  if (degree > max_degree)
    throw TowerTooLarge("regular representation degree " + order.get_str() +
                        " above guard");

  // x3 = (x1 x2)^{-1}
  std::vector<std::vector<Int>> images = {
      {Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(-1)}};

  CycleCheckReport rep;
  rep.order = order;
  std::size_t k = moduli.size();
  std::vector<unsigned long> radix(k);  // mixed-radix place values
  {
    unsigned long place = 1;
    for (std::size_t i = 0; i < k; ++i) {
      radix[i] = place;
      place *= moduli[i];
    }
  }

  for (std::size_t gen = 0; gen < 3; ++gen) {
    auto coords =
        detail::cokernel_coordinates(fp.snf, images[gen], moduli, torsion_cols);

    // element order by explicit iteration
    std::vector<unsigned long> acc(k, 0);
    Int elt_order(0);
    for (unsigned long step = 1;; ++step) {
      bool zero = true;
      for (std::size_t i = 0; i < k; ++i) {
        acc[i] = (acc[i] + coords[i]) % moduli[i];
        if (acc[i] != 0) zero = false;
      }
      if (zero) {
        elt_order = step;
        break;
      }
    }
    if (elt_order != ab.image_orders[gen])
      throw MismatchDetected("generator " + std::to_string(gen + 1) +
                             " has explicit order " + elt_order.get_str() +
                             " but closed form says " +
                             ab.image_orders[gen].get_str());
    rep.image_orders[gen] = elt_order;

    // translation permutation on the regular representation
    std::vector<bool> seen(degree, false);
    Int cycles(0);
    unsigned long e = elt_order.get_ui();
    for (unsigned long start = 0; start < degree; ++start) {
      if (seen[start]) continue;
      ++cycles;
      unsigned long point = start;
      unsigned long length = 0;
      do {
        seen[point] = true;
        ++length;
        // add the image coordinatewise
        unsigned long next = 0;
        for (std::size_t i = 0; i < k; ++i) {
          unsigned long digit = (point / radix[i]) % moduli[i];
          next += ((digit + coords[i]) % moduli[i]) * radix[i];
        }
        point = next;
      } while (point != start);
      if (length != e)
        throw MismatchDetected("translation cycle of length " +
                               std::to_string(length) +
                               " under a generator of order " +
                               elt_order.get_str());
    }
    if (cycles * elt_order != order)
      throw MismatchDetected("cycle count " + cycles.get_str() +
                             " times order " + elt_order.get_str() +
                             " != degree " + order.get_str());
    rep.cycle_counts[gen] = cycles;
  }
  return rep;
}

}  // namespace tgq
