#pragma once

// JSON (de)serialization for every persisted artifact. Rationals travel as
// "num/den" strings (integers without the denominator), never as floats;
// keys are emitted in sorted order so identical values serialize to
// identical bytes.

#include <fstream>
#include <string>

#include <json.hpp>

#include "sareg/colorings.hpp"
#include "sareg/cutting.hpp"
#include "sareg/regularity.hpp"
#include "sareg/relation.hpp"
#include "sareg/rt.hpp"

namespace sareg {

using Json = nlohmann::json;

inline Json rat_json(const Rat& q) { return rat_to_string(q); }
inline Rat rat_from_json(const Json& j) {
    if (!j.is_string()) throw input_error("expected a rational as a \"num/den\" string");
    return parse_rat(j.get<std::string>());
}

// ---- points ----

inline Json points_json(const PointSet& pts) {
    Json j;
    j["schema"] = "sareg/points/v1";
    j["dim"] = pts.dim;
    Json arr = Json::array();
    for (const auto& p : pts.points) {
        Json row = Json::array();
        for (const auto& c : p.coords) row.push_back(rat_json(c));
        arr.push_back(std::move(row));
    }
    j["points"] = std::move(arr);
    return j;
}

inline PointSet points_from_json(const Json& j) {
    if (!j.contains("dim") || !j.contains("points")) throw input_error("points: missing dim/points");
    std::size_t dim = j.at("dim").get<std::size_t>();
    std::vector<Point> pts;
    for (const auto& row : j.at("points")) {
        std::vector<Rat> coords;
        for (const auto& c : row) coords.push_back(rat_from_json(c));
        pts.emplace_back(std::move(coords));
    }
    return PointSet(dim, std::move(pts));
}

// ---- polynomials / formulas / relations ----

inline Json polynomial_json(const Polynomial& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) {
        Json exps = Json::array();
        for (auto x : e) exps.push_back(x);
        terms.push_back(Json::array({std::move(exps), rat_json(c)}));
    }
    return terms;
}

inline Polynomial polynomial_from_json(const Json& j, std::size_t nvars) {
    Polynomial p(nvars);
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 2) throw input_error("polynomial term must be [exps, coeff]");
        ExpVec e;
        for (const auto& x : term.at(0)) e.push_back(x.get<std::uint32_t>());
        p.add_term(e, rat_from_json(term.at(1)));
    }
    return p;
}

inline Json formula_json(const Formula& f) {
    Json j;
    switch (f.op()) {
        case Formula::Op::Atom:
            j["op"] = "atom";
            j["poly"] = f.atom_index();
            break;
        case Formula::Op::Not:
            j["op"] = "not";
            j["arg"] = formula_json(f.children()[0]);
            break;
        case Formula::Op::And:
        case Formula::Op::Or: {
            j["op"] = f.op() == Formula::Op::And ? "and" : "or";
            Json kids = Json::array();
            for (const auto& k : f.children()) kids.push_back(formula_json(k));
            j["args"] = std::move(kids);
            break;
        }
    }
    return j;
}

inline Formula formula_from_json(const Json& j) {
    std::string op = j.at("op").get<std::string>();
    if (op == "atom") return Formula::atom(j.at("poly").get<std::size_t>());
    if (op == "not") return Formula::negate(formula_from_json(j.at("arg")));
    if (op == "and" || op == "or") {
        std::vector<Formula> kids;
        for (const auto& k : j.at("args")) kids.push_back(formula_from_json(k));
        return op == "and" ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    throw input_error("formula op must be and|or|not|atom");
}

inline Json relation_json(const SemiAlgebraicRelation& r) {
    Json j;
    j["dim"] = r.dim;
    j["complexity"] = r.complexity;
    Json polys = Json::array();
    for (const auto& p : r.polys) polys.push_back(polynomial_json(p));
    j["polys"] = std::move(polys);
    j["formula"] = formula_json(r.formula);
    return j;
}

inline SemiAlgebraicRelation relation_from_json(const Json& j) {
    SemiAlgebraicRelation r;
    r.dim = j.at("dim").get<std::size_t>();
    r.complexity = j.at("complexity").get<std::size_t>();
    for (const auto& p : j.at("polys")) r.polys.push_back(polynomial_from_json(p, 2 * r.dim));
    r.formula = formula_from_json(j.at("formula"));
    r.validate();
    return r;
}

inline Json family_json(const RelationFamily& fam) {
    Json j;
    j["schema"] = "sareg/relations/v1";
    Json rels = Json::array();
    for (const auto& r : fam.relations) rels.push_back(relation_json(r));
    j["relations"] = std::move(rels);
    j["covering"] = fam.covering;
    j["disjoint"] = fam.disjoint;
    return j;
}

inline RelationFamily family_from_json(const Json& j) {
    RelationFamily fam;
    for (const auto& r : j.at("relations")) fam.relations.push_back(relation_from_json(r));
    fam.covering = j.value("covering", false);
    fam.disjoint = j.value("disjoint", false);
    fam.validate();
    return fam;
}

// ---- cuttings ----

inline Json erat_json(const ERat& e) {
    if (e.kind == ERat::NegInf) return "-inf";
    if (e.kind == ERat::PosInf) return "+inf";
    return rat_json(e.v);
}

inline Json cutting_json(const Cutting& cut) {
    Json j;
    j["schema"] = "sareg/cutting/v1";
    j["dim"] = cut.dim;
    j["r"] = rat_json(cut.r);
    j["budget"] = cut.budget;
    Json cells = Json::array();
    for (const auto& c : cut.cells) {
        Json cj;
        if (std::holds_alternative<Interval1>(c.region)) {
            const auto& iv = std::get<Interval1>(c.region);
            cj["interval"] = {{"lo", erat_json(iv.lo)},
                              {"hi", erat_json(iv.hi)},
                              {"lo_closed", iv.lo_closed},
                              {"hi_closed", iv.hi_closed}};
        } else {
            const auto& box = std::get<Box>(c.region);
            Json lo = Json::array(), hi = Json::array();
            for (const auto& s : box.sides) {
                lo.push_back(erat_json(s.lo));
                hi.push_back(erat_json(s.hi));
            }
            cj["box"] = {{"lo", std::move(lo)}, {"hi", std::move(hi)}};
        }
        cj["crossing"] = c.crossing;
        cj["containing"] = c.containing;
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    j["residual"] = cut.residual;
    return j;
}

// ---- partitions and reports ----

inline Json homogeneity_json(const HomogeneityReport& rep) {
    Json j;
    j["bad_mass"] = rat_json(rep.bad_mass);
    j["bad_fraction"] = rat_json(rep.bad_fraction);
    j["part_pairs"] = rep.part_pairs;
    Json bad = Json::array();
    for (const auto& bp : rep.bad_pairs) {
        Json b;
        b["part_a"] = bp.part_a;
        b["part_b"] = bp.part_b;
        Json refs = Json::array();
        for (const auto& [rel, u, v] : bp.refutations) refs.push_back(Json::array({rel, u, v}));
        b["refutations"] = std::move(refs);
        bad.push_back(std::move(b));
    }
    j["bad_pairs"] = std::move(bad);
    return j;
}

inline Json partition_json(const Partition& part) {
    Json j;
    j["schema"] = "sareg/partition/v1";
    j["K"] = part.parts.size();
    j["parts"] = part.parts;
    Json prov = Json::array();
    for (const auto& p : part.provenance)
        prov.push_back({{"cell", p.cell}, {"signature", p.signature}});
    j["provenance"] = std::move(prov);
    j["quarantined"] = part.quarantined;
    return j;
}

inline Partition partition_from_json(const Json& j) {
    Partition part;
    for (const auto& row : j.at("parts"))
        part.parts.push_back(row.get<std::vector<std::size_t>>());
    for (const auto& p : j.at("provenance"))
        part.provenance.push_back({p.at("cell").get<std::size_t>(),
                                   p.at("signature").get<std::size_t>()});
    if (j.contains("quarantined"))
        part.quarantined = j.at("quarantined").get<std::vector<std::size_t>>();
    return part;
}

// ---- colored graphs and layered certificates ----

inline Json colored_graph_json(const ColoredGraph& g) {
    Json j;
    j["schema"] = "sareg/graph/v1";
    j["points"] = points_json(g.points);
    j["relations"] = family_json(g.family);
    return j;
}

inline ColoredGraph colored_graph_from_json(const Json& j) {
    return ColoredGraph::build(points_from_json(j.at("points")),
                               family_from_json(j.at("relations")));
}

inline Json cert_node_json(const CertNode& node) {
    Json j;
    j["set"] = node.set;
    if (!node.kids.empty()) {
        j["color"] = node.color;
        Json bij = Json::array();
        for (auto [a, b] : node.bijection) bij.push_back(Json::array({a, b}));
        j["bijection"] = std::move(bij);
        j["left"] = cert_node_json(node.kids[0]);
        j["right"] = cert_node_json(node.kids[1]);
    }
    return j;
}

inline Json certificate_json(const LayeredCertificate& cert) {
    Json j;
    j["schema"] = "sareg/layered-certificate/v1";
    j["s"] = cert.s;
    j["tree"] = cert_node_json(cert.root);
    return j;
}

// ---- segment families ----

inline Json segments_json(const std::vector<Segment>& segs) {
    Json arr = Json::array();
    for (const auto& s : segs) {
        Json e;
        e["a"] = Json::array({rat_json(s.a[0]), rat_json(s.a[1])});
        e["b"] = Json::array({rat_json(s.b[0]), rat_json(s.b[1])});
        arr.push_back(std::move(e));
    }
    return arr;
}

inline std::vector<Segment> segments_from_json(const Json& j) {
    const Json& arr = j.is_array() ? j : j.at("segments");
    std::vector<Segment> segs;
    for (const auto& e : arr) {
        Point a{rat_from_json(e.at("a").at(0)), rat_from_json(e.at("a").at(1))};
        Point b{rat_from_json(e.at("b").at(0)), rat_from_json(e.at("b").at(1))};
        segs.emplace_back(std::move(a), std::move(b));
    }
    return segs;
}

// ---- files ----

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw input_error("parse error in " + path + ": " + ex.what());
    }
    return j;
}

inline void store_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace sareg
