#pragma once

// Small linear relations among sigma_k(x+j): the window partition, the
// homogeneous constraint families
//   moment:  sum_j j^h c_j = 0,                       h = 0..nu-1   (exact)
//   support: c_j = 0 for |j| < support_gap                          (exact)
//   block:   sum_h c_{a,h} ((x_a+h)^{1/k} - x_a^{1/k})^mu (x_a+h)^{nu - m/k} = 0,
//            per block a, mu = 0..mu_max, m = nu..k nu   (stored at declared_bits)
// with the null space parameterized exactly over the rationals for the exact
// rows and at declared precision for the block rows. Sampled solutions are
// exact rational vectors, so the integer-coefficient rows have residual zero
// in rational arithmetic by construction.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "sigmalab/arith.hpp"
#include "sigmalab/pnu.hpp"
#include "sigmalab/primes.hpp"
#include "sigmalab/rational.hpp"

namespace sigmalab {

struct RelationParams {
    long long x = 0;     // window center (the N to be related)
    long J = 0;          // window radius
    long nu = 4;
    long k = 2;
    DirichletCharacter chi;
    long block_len = 0;   // 0 -> [ln^3 x]
    long mu_max = -1;     // -1 -> [ln^2 x] (the truncation display's order; see note)
    long support_gap = -1; // -1 -> [J / ln x]; 0 disables the support rows
    bool use_moments = true;
    bool use_support = true;
    bool use_blocks = true;
    Prec declared_bits = 256;

    void validate() const {
        if (x < 2 || J < 1) throw DomainError("RelationParams: x >= 2 and J >= 1 required");
        if (nu < 2 || k < 2) throw DomainError("RelationParams: nu >= 2, k >= 2 required");
        if (chi.modulus < 2) throw DomainError("RelationParams: character required");
        if (support_gap >= 0 && support_gap >= J)
            throw DomainError("RelationParams: support_gap < J required");
    }
};

// Fills the defaulted fields from the asymptotic recipes; at desk scale the
// block length usually exceeds the window and the partition degenerates to a
// single block.
inline RelationParams resolve_defaults(RelationParams p) {
    double lx = std::log((double)p.x);
    if (p.block_len <= 0) p.block_len = std::max<long>(1, (long)(lx * lx * lx));
    if (p.mu_max < 0) p.mu_max = (long)(lx * lx);
    if (p.support_gap < 0) p.support_gap = (long)((double)p.J / lx);
    return p;
}

struct Partition {
    std::vector<long long> boundaries; // b_0 = x-J < ... < b_B = x+J+1; blocks [b_i, b_{i+1})
    bool merged_tail = false;

    size_t blocks() const { return boundaries.size() - 1; }
};

inline Partition build_partition(const RelationParams& params) {
    params.validate();
    RelationParams p = resolve_defaults(params);
    long long lo = p.x - p.J, hi = p.x + p.J + 1;
    long long W = hi - lo;
    Partition out;
    out.boundaries.push_back(lo);
    if (W < 2 * p.block_len) {
        out.boundaries.push_back(hi); // degenerate single block
        return out;
    }
    long long pos = lo;
    while (hi - pos >= 2 * p.block_len) {
        pos += p.block_len;
        out.boundaries.push_back(pos);
    }
    if (pos < hi) {
        out.boundaries.push_back(hi); // merged right-most block, length in [block_len, 2 block_len)
        out.merged_tail = (hi - pos) != p.block_len;
    }
    return out;
}

enum class RowKind { moment, support, block };

struct ConstraintSystem {
    RelationParams params; // resolved
    Partition partition;
    long D = 0; // unknowns: 2J+1
    std::vector<std::vector<Rat>> exact_rows;
    std::vector<RowKind> exact_kinds;
    struct BlockSpec {
        size_t alpha;
        long mu, m;
    };
    std::vector<BlockSpec> block_specs;
    std::vector<std::vector<Real>> block_rows; // max-normalized, at declared_bits

    size_t rows() const { return exact_rows.size() + block_rows.size(); }
};

namespace detail {

inline std::vector<Real> evaluate_block_row(const RelationParams& p, const Partition& part,
                                            const ConstraintSystem::BlockSpec& spec, Prec bits) {
    Prec work = bits + 64;
    long long b0 = part.boundaries[spec.alpha], b1 = part.boundaries[spec.alpha + 1];
    std::vector<Real> row((size_t)(2 * p.J + 1), Real(bits));
    Real xa((long)b0, work);
    Real xa_root = rootn(xa, (unsigned long)p.k);
    Real maxabs(work);
    std::vector<Real> tmp;
    tmp.reserve((size_t)(b1 - b0));
    for (long long n = b0; n < b1; ++n) {
        Real nn((long)n, work);
        Real diff = rootn(nn, (unsigned long)p.k) - xa_root; // (x_a+h)^{1/k} - x_a^{1/k}
        Real expo = Real(p.nu, work) - Real(spec.m, work) / Real(p.k, work);
        Real v = pow(diff, spec.mu) * pow(nn, expo);
        if (abs(v) > maxabs) maxabs = abs(v);
        tmp.push_back(v);
    }
    if (maxabs.is_zero()) maxabs = Real(1L, work);
    for (long long n = b0; n < b1; ++n)
        row[(size_t)(n - (p.x - p.J))] = (tmp[(size_t)(n - b0)] / maxabs).at_prec(bits);
    return row;
}

} // namespace detail

struct RowCounts {
    long moment = 0, support = 0, block = 0;
    long unknowns = 0;
    long total() const { return moment + support + block; }
};

// Cheap count of the constraint families (no row evaluation).
inline RowCounts count_rows(const RelationParams& params, const Partition& part) {
    RelationParams p = resolve_defaults(params);
    RowCounts rc;
    rc.unknowns = 2 * p.J + 1;
    if (p.use_moments) rc.moment = p.nu;
    if (p.use_support && p.support_gap > 0) rc.support = 2 * p.support_gap - 1;
    if (p.use_blocks)
        rc.block = (long)part.blocks() * (p.mu_max + 1) * (p.k * p.nu - p.nu + 1);
    return rc;
}

inline ConstraintSystem assemble_constraints(const RelationParams& params, const Partition& part) {
    RelationParams p = resolve_defaults(params);
    p.validate();

    RowCounts rc = count_rows(p, part);
    // a support row eliminates its unknown outright, so feasibility counts both out
    if (rc.moment + rc.block >= rc.unknowns - rc.support)
        throw InfeasibleSystem("assemble_constraints: " + std::to_string(rc.total()) +
                               " rows against " + std::to_string(rc.unknowns) + " unknowns");

    ConstraintSystem sys;
    sys.params = p;
    sys.partition = part;
    sys.D = 2 * p.J + 1;

    if (p.use_moments) {
        for (long h = 0; h < p.nu; ++h) {
            std::vector<Rat> row((size_t)sys.D, Rat(0));
            for (long j = -p.J; j <= p.J; ++j) {
                Rat v = (h == 0) ? Rat(1) : rat_pow(Rat(j), h);
                row[(size_t)(j + p.J)] = v;
            }
            sys.exact_rows.push_back(std::move(row));
            sys.exact_kinds.push_back(RowKind::moment);
        }
    }
    if (p.use_support && p.support_gap > 0) {
        for (long j = -(p.support_gap - 1); j <= p.support_gap - 1; ++j) {
            std::vector<Rat> row((size_t)sys.D, Rat(0));
            row[(size_t)(j + p.J)] = 1;
            sys.exact_rows.push_back(std::move(row));
            sys.exact_kinds.push_back(RowKind::support);
        }
    }
    if (p.use_blocks) {
        for (size_t a = 0; a < part.blocks(); ++a)
            for (long mu = 0; mu <= p.mu_max; ++mu)
                for (long m = p.nu; m <= p.k * p.nu; ++m)
                    sys.block_specs.push_back({a, mu, m});
        for (auto& spec : sys.block_specs)
            sys.block_rows.push_back(detail::evaluate_block_row(p, part, spec, p.declared_bits));
    }
    return sys;
}

struct NullspaceFactorization {
    std::vector<std::vector<Rat>> basis;        // B: columns of length D, exact
    std::vector<std::vector<Real>> z_basis;     // Z: columns of length d1
    std::vector<std::vector<Real>> ortho_coeff; // alpha_i: d2 columns in Z-coordinates
    long d1 = 0, d2 = 0;
    Prec bits = 0;
};

namespace detail {

// Exact RREF null-space basis of the rational rows; identity on free columns.
inline std::vector<std::vector<Rat>> rational_nullspace(std::vector<std::vector<Rat>> rows, long D) {
    size_t nr = rows.size();
    std::vector<long> pivot_col;
    size_t rank = 0;
    for (long col = 0; col < D && rank < nr; ++col) {
        size_t sel = rank;
        while (sel < nr && rows[sel][(size_t)col] == 0) ++sel;
        if (sel == nr) continue;
        std::swap(rows[rank], rows[sel]);
        Rat inv = Rat(1) / rows[rank][(size_t)col];
        for (long c = col; c < D; ++c) rows[rank][(size_t)c] *= inv;
        for (size_t r = 0; r < nr; ++r) {
            if (r == rank) continue;
            Rat f = rows[r][(size_t)col];
            if (f == 0) continue;
            for (long c = col; c < D; ++c) rows[r][(size_t)c] -= f * rows[rank][(size_t)c];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot((size_t)D, false);
    for (long c : pivot_col) is_pivot[(size_t)c] = true;
    std::vector<std::vector<Rat>> basis;
    for (long free = 0; free < D; ++free) {
        if (is_pivot[(size_t)free]) continue;
        std::vector<Rat> v((size_t)D, Rat(0));
        v[(size_t)free] = 1;
        for (size_t r = 0; r < rank; ++r)
            v[(size_t)pivot_col[r]] = -rows[r][(size_t)free];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Null space of a Real matrix (rows x cols) by Gauss-Jordan with partial
// pivoting. Rows that are numerically zero relative to the matrix scale are
// exact linear consequences of rows already imposed and are dropped; pivots
// inside the ambiguity band abort with RankError so the caller can escalate.
inline std::vector<std::vector<Real>> real_nullspace(std::vector<std::vector<Real>> rows,
                                                     long cols, Prec bits) {
    // Noise from exactly-dependent combinations lands near 2^-bits times the
    // elimination growth; genuine pivots of a usable system stay far above
    // 2^-bits/3. Everything in between is ambiguous at this precision.
    Real zero_cut = Real::pow2(-(long)(3 * bits / 4));
    Real accept = Real::pow2(-(long)(bits / 3));

    // classify row scales against the global scale before normalizing
    Real global(bits);
    std::vector<Real> scale;
    scale.reserve(rows.size());
    for (auto& r : rows) {
        Real m(bits);
        for (auto& v : r)
            if (abs(v) > m) m = abs(v);
        scale.push_back(m);
        if (m > global) global = m;
    }
    if (global.is_zero()) global = Real(1L, bits);
    {
        std::vector<std::vector<Real>> kept;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (scale[i] <= global * zero_cut) continue; // dependent row, drop
            if (scale[i] < global * accept)
                throw RankError("real_nullspace: row scale in the ambiguity band");
            for (auto& v : rows[i]) v = v / scale[i];
            kept.push_back(std::move(rows[i]));
        }
        rows.swap(kept);
    }
    size_t nr = rows.size();
    std::vector<long> pivot_col;
    size_t rank = 0;
    for (long col = 0; col < cols && rank < nr; ++col) {
        size_t sel = rank;
        Real best(bits);
        for (size_t r = rank; r < nr; ++r)
            if (abs(rows[r][(size_t)col]) > best) {
                best = abs(rows[r][(size_t)col]);
                sel = r;
            }
        if (best <= zero_cut) continue; // column already annihilated
        if (best < accept)
            throw RankError("real_nullspace: pivot magnitude 2^" +
                            std::to_string(log2(best).to_long()) + " in the ambiguity band");
        std::swap(rows[rank], rows[sel]);
        Real inv = Real(1L, bits) / rows[rank][(size_t)col];
        for (long c = 0; c < cols; ++c) rows[rank][(size_t)c] = rows[rank][(size_t)c] * inv;
        for (size_t r = 0; r < nr; ++r) {
            if (r == rank) continue;
            Real f = rows[r][(size_t)col];
            if (abs(f) <= zero_cut) continue;
            for (long c = 0; c < cols; ++c)
                rows[r][(size_t)c] = rows[r][(size_t)c] - f * rows[rank][(size_t)c];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot((size_t)cols, false);
    for (long c : pivot_col) is_pivot[(size_t)c] = true;
    std::vector<std::vector<Real>> basis;
    for (long free = 0; free < cols; ++free) {
        if (is_pivot[(size_t)free]) continue;
        std::vector<Real> v((size_t)cols, Real(bits));
        v[(size_t)free] = Real(1L, bits);
        for (size_t r = 0; r < rank; ++r) v[(size_t)pivot_col[r]] = -rows[r][(size_t)free];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace detail

inline NullspaceFactorization factor_nullspace(const ConstraintSystem& sys) {
    NullspaceFactorization f;
    f.bits = sys.params.declared_bits;

    f.basis = detail::rational_nullspace(sys.exact_rows, sys.D);
    f.d1 = (long)f.basis.size();
    if (f.d1 == 0) throw InfeasibleSystem("factor_nullspace: exact rows have trivial null space");

    int tries = 0;
    Prec bits = f.bits;
    std::vector<std::vector<Real>> block_rows = sys.block_rows;
    while (true) {
        try {
            if (block_rows.empty()) {
                f.z_basis.assign((size_t)f.d1, {});
                for (long i = 0; i < f.d1; ++i) {
                    std::vector<Real> e((size_t)f.d1, Real(bits));
                    e[(size_t)i] = Real(1L, bits);
                    f.z_basis[(size_t)i] = std::move(e);
                }
            } else {
                // G = block_rows * B
                std::vector<std::vector<Real>> G;
                G.reserve(block_rows.size());
                for (auto& row : block_rows) {
                    std::vector<Real> g((size_t)f.d1, Real(bits));
                    for (long i = 0; i < f.d1; ++i) {
                        Real acc(bits);
                        for (long j = 0; j < sys.D; ++j) {
                            const Rat& bij = f.basis[(size_t)i][(size_t)j];
                            if (bij == 0) continue;
                            acc += row[(size_t)j].at_prec(bits) * to_real(bij, bits);
                        }
                        g[(size_t)i] = acc;
                    }
                    G.push_back(std::move(g));
                }
                f.z_basis = detail::real_nullspace(std::move(G), f.d1, bits);
            }
            break;
        } catch (const RankError&) {
            if (++tries > 3) throw;
            bits *= 2;
            block_rows.clear();
            for (auto& spec : sys.block_specs)
                block_rows.push_back(
                    detail::evaluate_block_row(sys.params, sys.partition, spec, bits));
        }
    }
    f.d2 = (long)f.z_basis.size();
    if (f.d2 == 0) throw InfeasibleSystem("factor_nullspace: block rows exhaust the null space");

    // Orthonormalize the composite vectors v_i = B (Z alpha) by modified
    // Gram-Schmidt, tracking the combination coefficients in Z-coordinates so
    // sampled vectors stay inside the exact span.
    std::vector<std::vector<Real>> V((size_t)f.d2);
    f.ortho_coeff.assign((size_t)f.d2, {});
    for (long i = 0; i < f.d2; ++i) {
        std::vector<Real> alpha((size_t)f.d2, Real(bits));
        alpha[(size_t)i] = Real(1L, bits);
        // v = B * (Z e_i)
        std::vector<Real> z((size_t)f.d1, Real(bits));
        for (long t = 0; t < f.d1; ++t) z[(size_t)t] = f.z_basis[(size_t)i][(size_t)t];
        std::vector<Real> v((size_t)sys.D, Real(bits));
        for (long j = 0; j < sys.D; ++j) {
            Real acc(bits);
            for (long t = 0; t < f.d1; ++t) {
                const Rat& bij = f.basis[(size_t)t][(size_t)j];
                if (bij == 0) continue;
                acc += to_real(bij, bits) * z[(size_t)t];
            }
            v[(size_t)j] = acc;
        }
        for (long prev = 0; prev < i; ++prev) {
            Real dot(bits);
            for (long j = 0; j < sys.D; ++j) dot += V[(size_t)prev][(size_t)j] * v[(size_t)j];
            for (long j = 0; j < sys.D; ++j)
                v[(size_t)j] = v[(size_t)j] - dot * V[(size_t)prev][(size_t)j];
            for (long t = 0; t < f.d2; ++t)
                alpha[(size_t)t] = alpha[(size_t)t] - dot * f.ortho_coeff[(size_t)prev][(size_t)t];
        }
        Real norm(bits);
        for (long j = 0; j < sys.D; ++j) norm += v[(size_t)j] * v[(size_t)j];
        norm = sqrt(norm);
        if (norm.is_zero()) throw RankError("factor_nullspace: degenerate Gram-Schmidt");
        for (long j = 0; j < sys.D; ++j) v[(size_t)j] = v[(size_t)j] / norm;
        for (long t = 0; t < f.d2; ++t) alpha[(size_t)t] = alpha[(size_t)t] / norm;
        V[(size_t)i] = std::move(v);
        f.ortho_coeff[(size_t)i] = std::move(alpha);
    }
    return f;
}

struct RelationSolution {
    std::vector<Rat> c;   // index j + J; max |c_j| = 1 exactly
    std::vector<Rat> C;   // capital coefficients, same indexing
    bool exact_rows_zero = false;
    Real block_residual_max = Real::nan();
    double c0_abs = 0;
    double log_c0_over_log_j = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// Deterministic standard normals: splitmix64 + Box-Muller.
struct NormalSampler {
    std::uint64_t state;
    bool have = false;
    double cached = 0;
    explicit NormalSampler(std::uint64_t seed) : state(seed) {}
    double u01() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return ((double)(z >> 11) + 0.5) / 9007199254740992.0;
    }
    double next() {
        if (have) {
            have = false;
            return cached;
        }
        double u1 = u01(), u2 = u01();
        double r = std::sqrt(-2.0 * std::log(u1));
        cached = r * std::sin(2.0 * M_PI * u2);
        have = true;
        return r * std::cos(2.0 * M_PI * u2);
    }
};

} // namespace detail

// C_j = sum_{i >= j} c_i (i - j)^{nu - 1}, exact.
inline std::vector<Rat> capital_coefficients(const std::vector<Rat>& c, long nu, long J) {
    if ((long)c.size() != 2 * J + 1) throw DomainError("capital_coefficients: size mismatch");
    std::vector<Rat> C((size_t)(2 * J + 1), Rat(0));
    for (long j = -J; j <= J; ++j) {
        Rat acc = 0;
        for (long i = j; i <= J; ++i) {
            long d = i - j;
            if (d == 0) continue; // 0^{nu-1} = 0 for nu >= 2
            acc += c[(size_t)(i + J)] * rat_pow(Rat(d), nu - 1);
        }
        C[(size_t)(j + J)] = acc;
    }
    return C;
}

inline RelationSolution sample_solution(const ConstraintSystem& sys,
                                        const NullspaceFactorization& f, std::uint64_t seed) {
    Prec bits = f.bits;
    detail::NormalSampler rng(seed);
    RelationSolution sol;
    sol.seed = seed;

    std::vector<Rat> c;
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<double> w((size_t)f.d2);
        for (auto& v : w) v = rng.next();
        // z-coordinates of the Gaussian combination of orthonormal vectors
        std::vector<Real> zc((size_t)f.d2, Real(bits));
        for (long i = 0; i < f.d2; ++i) {
            Real acc(bits);
            for (long t = 0; t < f.d2; ++t)
                acc += Real(w[(size_t)t], bits) * f.ortho_coeff[(size_t)t][(size_t)i];
            zc[(size_t)i] = acc;
        }
        std::vector<Real> z((size_t)f.d1, Real(bits));
        for (long t = 0; t < f.d1; ++t) {
            Real acc(bits);
            for (long i = 0; i < f.d2; ++i) acc += zc[(size_t)i] * f.z_basis[(size_t)i][(size_t)t];
            z[(size_t)t] = acc;
        }
        // exact combination c = B z with z frozen as dyadic rationals
        std::vector<Rat> zr((size_t)f.d1);
        for (long t = 0; t < f.d1; ++t) zr[(size_t)t] = to_rational(z[(size_t)t]);
        c.assign((size_t)sys.D, Rat(0));
        for (long t = 0; t < f.d1; ++t) {
            if (zr[(size_t)t] == 0) continue;
            for (long j = 0; j < sys.D; ++j) {
                const Rat& bij = f.basis[(size_t)t][(size_t)j];
                if (bij == 0) continue;
                c[(size_t)j] += bij * zr[(size_t)t];
            }
        }
        Rat mx = 0;
        for (auto& v : c)
            if (abs(v) > mx) mx = abs(v);
        if (mx != 0) {
            for (auto& v : c) v /= mx;
            break;
        }
    }
    sol.c = std::move(c);

    // residuals
    sol.exact_rows_zero = true;
    for (auto& row : sys.exact_rows) {
        Rat acc = 0;
        for (long j = 0; j < sys.D; ++j)
            if (row[(size_t)j] != 0 && sol.c[(size_t)j] != 0) acc += row[(size_t)j] * sol.c[(size_t)j];
        if (acc != 0) sol.exact_rows_zero = false;
    }
    Real bmax(bits);
    for (auto& row : sys.block_rows) {
        Real acc(bits);
        for (long j = 0; j < sys.D; ++j) {
            if (sol.c[(size_t)j] == 0) continue;
            acc += row[(size_t)j] * to_real(sol.c[(size_t)j], bits);
        }
        if (abs(acc) > bmax) bmax = abs(acc);
    }
    sol.block_residual_max = bmax;

    sol.C = capital_coefficients(sol.c, sys.params.nu, sys.params.J);
    Real c0 = to_real(sol.C[(size_t)sys.params.J], 64);
    sol.c0_abs = std::abs(c0.to_double());
    sol.log_c0_over_log_j =
        sol.c0_abs > 0 ? std::log(sol.c0_abs) / std::log((double)sys.params.J) : -1e300;
    return sol;
}

// One factorization + one sample; the spec's solve_nullspace surface.
inline RelationSolution solve_nullspace(const ConstraintSystem& sys, std::uint64_t seed) {
    auto f = factor_nullspace(sys);
    return sample_solution(sys, f, seed);
}

struct IdentityCheck {
    Complex lhs, rhs;
    Real abs_diff;
    long dropped_chi_zero = 0; // RHS terms with chi(x+j) = 0
};

// E:rePsigma: sum_j c_j P_nu(x+j) = sum_j C_j sigma_k(x+j) chi(x+j).
inline IdentityCheck verify_relation_identity(const PrecisionContext& ctx,
                                              const RelationParams& params,
                                              const RelationSolution& sol) {
    RelationParams p = resolve_defaults(params);
    Prec wp = ctx.working_bits;
    PnuParams pnp;
    pnp.k = p.k;
    pnp.nu = p.nu;
    pnp.chi = p.chi;

    IdentityCheck out{Complex(wp), Complex(wp), Real(wp), 0};
    for (long j = -p.J; j <= p.J; ++j) {
        const Rat& cj = sol.c[(size_t)(j + p.J)];
        if (cj != 0)
            out.lhs += to_real(cj, wp) * pnu_direct(ctx, pnp, Real((long)(p.x + j), wp));
        const Rat& Cj = sol.C[(size_t)(j + p.J)];
        if (Cj != 0) {
            if (p.chi.log_at((std::uint64_t)(p.x + j)) < 0) {
                ++out.dropped_chi_zero;
                continue;
            }
            out.rhs += to_real(Cj, wp) * p.chi.value((std::uint64_t)(p.x + j), wp) *
                       sigma_k(ctx, (std::uint64_t)(p.x + j), p.k);
        }
    }
    out.abs_diff = cabs(out.lhs - out.rhs);
    return out;
}

struct AnalyticResidualReport {
    bool main_moment_exact_zero = false;    // sum_j c_j (x+j)^{nu-1} == 0 in Q
    bool residue_moments_exact_zero = false; // sum_j c_j (x+j)^{nu-m} == 0 in Q, m = 2..nu
    Real main_cancellation;     // |sum_j c_j main_j| (float route)
    Real residue_cancellation;  // |sum_j c_j residueL_j|
    Real surviving_series;      // |sum_j c_j singular_j|
    Real reference_scale;       // max_j |P_nu(x+j)|
    double suppression_ratio = 0;
};

// Routes sum_j c_j P_nu(x+j) through the functional-equation expansion and
// reports which blocks cancel under the moment conditions.
inline AnalyticResidualReport analytic_residual(const PrecisionContext& ctx,
                                                const RelationParams& params,
                                                const RelationSolution& sol,
                                                const Real& series_abs_tol) {
    RelationParams p = resolve_defaults(params);
    if (p.nu < 6 * p.k)
        throw DomainError("analytic_residual: nu >= 6k required for the analytic route");
    Prec wp = ctx.working_bits;

    // exact moment cancellations
    AnalyticResidualReport rep{false, false, Real(wp), Real(wp), Real(wp), Real(wp), 0};
    {
        Rat acc = 0;
        for (long j = -p.J; j <= p.J; ++j)
            acc += sol.c[(size_t)(j + p.J)] * rat_pow(Rat(p.x + j), p.nu - 1);
        rep.main_moment_exact_zero = (acc == 0);
        bool all = true;
        for (long m = 2; m <= p.nu; ++m) {
            Rat am = 0;
            for (long j = -p.J; j <= p.J; ++j)
                am += sol.c[(size_t)(j + p.J)] * rat_pow(Rat(p.x + j), p.nu - m);
            if (am != 0) all = false;
        }
        rep.residue_moments_exact_zero = all;
    }

    PnuParams pnp;
    pnp.k = p.k;
    pnp.nu = p.nu;
    pnp.chi = p.chi;
    pnp.abs_tol = series_abs_tol;

    Complex main_sum(wp), res_sum(wp), sing_sum(wp);
    for (long j = -p.J; j <= p.J; ++j) {
        const Rat& cj = sol.c[(size_t)(j + p.J)];
        if (cj == 0) continue;
        Real cjr = to_real(cj, wp);
        auto an = pnu_analytic(ctx, pnp, Real((long)(p.x + j), wp));
        main_sum += cjr * an.main_term;
        res_sum += cjr * an.residue_l_part;
        sing_sum += cjr * an.singular_part;

        PnuParams dp = pnp;
        Complex direct = pnu_direct(ctx, dp, Real((long)(p.x + j), wp));
        Real mag = cabs(direct);
        if (mag > rep.reference_scale) rep.reference_scale = mag;
    }
    rep.main_cancellation = cabs(main_sum);
    rep.residue_cancellation = cabs(res_sum);
    rep.surviving_series = cabs(sing_sum);
    if (rep.reference_scale > 0)
        rep.suppression_ratio = (rep.surviving_series / rep.reference_scale).to_double();
    return rep;
}

struct TrialRecord {
    std::uint64_t seed;
    double c0_abs;
    double log_ratio; // log|C_0| / log J
    bool exact_zero;
    double block_residual;
};

struct ScanStats {
    RelationParams params;
    long trials = 0;
    long nullity = 0;
    double min_ratio = 0, median_ratio = 0, max_ratio = 0;
    double frac_above_half = 0;               // |C_0| > J^{nu/2}
    double frac_above_theta[3] = {0, 0, 0};   // theta in {0.1, 0.25, 0.5}: |C_0| > J^{theta nu}
    double remark2_bound = 0;                 // c 4^nu log^3 x J^c log^{3 nu} x
    double frac_below_remark2 = 0;
    std::vector<TrialRecord> records;
};

// Seeded exploration of |C_0| for random null-space samples. Purely
// descriptive: reports the distribution, asserts nothing.
inline ScanStats conjecture_scan(const RelationParams& params, long trials, std::uint64_t seed) {
    if (trials < 1) throw DomainError("conjecture_scan: trials >= 1");
    RelationParams p = resolve_defaults(params);
    auto part = build_partition(p);
    auto sys = assemble_constraints(p, part);
    auto fac = factor_nullspace(sys);

    ScanStats st;
    st.params = p;
    st.trials = trials;
    st.nullity = fac.d2;

    double lx = std::log((double)p.x);
    double cparam = (double)p.nu / (double)p.k;
    st.remark2_bound = cparam * std::pow(4.0, (double)p.nu) * lx * lx * lx *
                       std::pow((double)p.J, cparam) * std::pow(lx, 3.0 * (double)p.nu);

    std::vector<double> ratios;
    long above_half = 0, above_theta[3] = {0, 0, 0}, below_r2 = 0;
    for (long t = 0; t < trials; ++t) {
        auto sol = sample_solution(sys, fac, seed + (std::uint64_t)t);
        TrialRecord rec{sol.seed, sol.c0_abs, sol.log_c0_over_log_j, sol.exact_rows_zero,
                        sol.block_residual_max.is_nan() ? 0.0
                                                        : sol.block_residual_max.to_double()};
        st.records.push_back(rec);
        ratios.push_back(rec.log_ratio);
        if (rec.c0_abs > std::pow((double)p.J, 0.5 * (double)p.nu)) ++above_half;
        double thetas[3] = {0.1, 0.25, 0.5};
        for (int i = 0; i < 3; ++i)
            if (rec.c0_abs > std::pow((double)p.J, thetas[i] * (double)p.nu)) ++above_theta[i];
        if (rec.c0_abs < st.remark2_bound) ++below_r2;
    }
    std::sort(ratios.begin(), ratios.end());
    st.min_ratio = ratios.front();
    st.max_ratio = ratios.back();
    st.median_ratio = ratios[ratios.size() / 2];
    st.frac_above_half = (double)above_half / (double)trials;
    for (int i = 0; i < 3; ++i) st.frac_above_theta[i] = (double)above_theta[i] / (double)trials;
    st.frac_below_remark2 = (double)below_r2 / (double)trials;
    return st;
}

} // namespace sigmalab
