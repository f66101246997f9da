#pragma once

// Semi-algebraic binary relations on point sets: at most t polynomials in 2d
// variables of degree at most t, combined by a Boolean sign formula. Also the
// relation family (one relation per color) and the symmetrizing lift for
// ordered relations.

#include <string>
#include <vector>

#include "sareg/formula.hpp"
#include "sareg/point.hpp"
#include "sareg/polynomial.hpp"

namespace sareg {

struct SemiAlgebraicRelation {
    std::size_t dim = 0;        // points live in R^dim
    std::size_t complexity = 0; // declared bound t
    std::vector<Polynomial> polys;  // each in 2*dim variables
    Formula formula;

    void validate() const {
        if (polys.size() > complexity)
            throw input_error("relation has more polynomials than its complexity bound");
        for (const auto& p : polys) {
            if (p.nvars() != 2 * dim) throw input_error("relation polynomial arity != 2d");
            if (p.total_degree() > complexity)
                throw input_error("relation polynomial degree exceeds complexity bound");
        }
        if (!polys.empty() && formula.max_atom_index() >= polys.size())
            throw input_error("formula references a polynomial outside the relation");
    }

    std::vector<int> sign_vector(const Point& u, const Point& v) const {
        std::vector<int> s;
        s.reserve(polys.size());
        for (const auto& p : polys) s.push_back(sgn(eval_pair(p, u, v)));
        return s;
    }

    bool holds(const Point& u, const Point& v) const {
        if (u.dim() != dim || v.dim() != dim)
            throw input_error("relation_holds: dimension mismatch");
        return formula.eval(sign_vector(u, v));
    }

    // True if every polynomial is literally invariant under swapping the two
    // argument blocks; a sufficient structural certificate of symmetry.
    bool structurally_symmetric() const {
        for (const auto& p : polys)
            if (!(p.swap_halves() == p)) return false;
        return true;
    }
};

inline Rat eval_polynomial(const Polynomial& p, const Point& u, const Point& v) {
    return eval_pair(p, u, v);
}

inline bool relation_holds(const SemiAlgebraicRelation& e, const Point& u, const Point& v) {
    return e.holds(u, v);
}

struct RelationFamily {
    std::vector<SemiAlgebraicRelation> relations;
    bool covering = false;
    bool disjoint = false;

    std::size_t size() const { return relations.size(); }
    const SemiAlgebraicRelation& operator[](std::size_t i) const { return relations[i]; }

    std::size_t dim() const {
        if (relations.empty()) throw input_error("empty relation family");
        return relations.front().dim;
    }

    std::size_t total_polynomials() const {
        std::size_t s = 0;
        for (const auto& r : relations) s += r.polys.size();
        return s;
    }

    std::uint32_t max_degree() const {
        std::uint32_t d = 0;
        for (const auto& r : relations)
            for (const auto& p : r.polys) d = std::max(d, p.total_degree());
        return d;
    }

    void validate() const {
        for (const auto& r : relations) {
            r.validate();
            if (r.dim != dim()) throw input_error("relation family mixes dimensions");
        }
    }
};

struct FamilyReport {
    // pairs (i, j), i < j, of point indices
    std::vector<std::pair<std::size_t, std::size_t>> covering_violations;
    std::vector<std::pair<std::size_t, std::size_t>> disjointness_violations;
    std::vector<std::pair<std::size_t, std::size_t>> symmetry_violations;

    bool clean() const {
        return covering_violations.empty() && disjointness_violations.empty() &&
               symmetry_violations.empty();
    }
};

// Exhaustive O(n^2 m) scan. Covering and disjointness are checked against
// the family's declared flags; symmetry is checked on every pair unless all
// relations are structurally swap-invariant.
inline FamilyReport validate_family(const RelationFamily& fam, const PointSet& pts) {
    FamilyReport rep;
    bool structural = true;
    for (const auto& r : fam.relations) structural = structural && r.structurally_symmetric();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            std::size_t hits = 0;
            for (const auto& r : fam.relations) {
                bool h = r.holds(pts[i], pts[j]);
                if (h) ++hits;
                if (!structural && h != r.holds(pts[j], pts[i])) {
                    rep.symmetry_violations.emplace_back(i, j);
                }
            }
            if (fam.covering && hits == 0) rep.covering_violations.emplace_back(i, j);
            if (fam.disjoint && hits > 1) rep.disjointness_violations.emplace_back(i, j);
        }
    }
    return rep;
}

// Lifts an ordered relation on an ordered point list into a symmetric
// relation on points of R^{d+1}: the point at rank i (1-based) becomes
// (v, i), and the lifted relation compares last coordinates to orient the
// pair before applying the original polynomials. Complexity grows to at most
// 2t + 2.
inline std::pair<PointSet, SemiAlgebraicRelation>
symmetrize_ordered_relation(const SemiAlgebraicRelation& ordered, const PointSet& pts) {
    const std::size_t d = ordered.dim;
    if (pts.dim != d) throw input_error("symmetrize: dimension mismatch");
    std::vector<Point> lifted;
    lifted.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<Rat> c = pts[i].coords;
        c.push_back(Rat(static_cast<long>(i + 1)));
        lifted.emplace_back(std::move(c));
    }
    for (std::size_t i = 0; i < lifted.size(); ++i)
        for (std::size_t j = i + 1; j < lifted.size(); ++j)
            if (lifted[i].coords.back() == lifted[j].coords.back())
                throw input_error("symmetrize: duplicate ranks");

    const std::size_t dl = d + 1;        // lifted point dimension
    const std::size_t nv = 2 * dl;       // lifted polynomial arity
    // Re-embed a polynomial in 2d vars into 2(d+1) vars, optionally with the
    // two argument blocks swapped.
    auto embed = [&](const Polynomial& p, bool swapped) {
        Polynomial q(nv);
        for (const auto& [e, c] : p.terms()) {
            ExpVec f(nv, 0);
            for (std::size_t k = 0; k < d; ++k) {
                std::size_t a = swapped ? dl + k : k;
                std::size_t b = swapped ? k : dl + k;
                f[a] = e[k];
                f[b] = e[d + k];
            }
            q.add_term(f, c);
        }
        return q;
    };

    SemiAlgebraicRelation sym;
    sym.dim = dl;
    sym.complexity = 2 * ordered.complexity + 2;
    const std::size_t s = ordered.polys.size();
    for (const auto& p : ordered.polys) sym.polys.push_back(embed(p, false));
    for (const auto& p : ordered.polys) sym.polys.push_back(embed(p, true));
    // D = rank(first) - rank(second); D < 0 means the first argument comes
    // earlier in the order.
    Polynomial diff = Polynomial::variable(nv, dl - 1) - Polynomial::variable(nv, nv - 1);
    sym.polys.push_back(diff);        // index 2s
    sym.polys.push_back(-diff);       // index 2s + 1
    Formula first_earlier = lt(2 * s);          // D < 0
    Formula second_earlier = lt(2 * s + 1);     // -D < 0, i.e. D > 0
    Formula fwd = Formula::conj({first_earlier, ordered.formula});
    Formula bwd = Formula::conj({second_earlier, ordered.formula.shift_atoms(s)});
    sym.formula = Formula::disj({fwd, bwd});
    sym.validate();
    return {PointSet(dl, std::move(lifted)), sym};
}

}  // namespace sareg
