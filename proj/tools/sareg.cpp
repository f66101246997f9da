// sareg: batch front door for the semi-algebraic regularity toolkit.
//
// Exit codes: 0 success / verified PASS; 1 verified FAIL (witness emitted);
// 2 input error; 3 degraded (e.g. the regularity pipeline refused the scale).
// Identical invocations produce byte-identical artifacts.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "sareg/distances.hpp"
#include "sareg/json_io.hpp"
#include "sareg/ramsey.hpp"
#include "sareg/sareg.hpp"

namespace {

using namespace sareg;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitDegraded = 3;

void emit(const std::string& path, const Json& j) {
    if (path.empty() || path == "-")
        std::cout << j.dump(2) << '\n';
    else
        store_json(path, j);
}

Rat parse_eps(const std::string& s) {
    Rat eps = parse_rat(s);
    if (!(eps > 0 && eps < 1)) throw input_error("eps must lie in (0,1)");
    return eps;
}

struct PartitionArgs {
    std::string points, relations, out, csv, cutting_out;
    std::string eps = "1/10";
    bool equitable = false;
    int depth_cap = 40;
};

int run_partition(const PartitionArgs& a) {
    PointSet pts = points_from_json(load_json(a.points));
    RelationFamily fam = family_from_json(load_json(a.relations));
    Rat eps = parse_eps(a.eps);
    RegularityOptions opts;
    opts.depth_cap = a.depth_cap;
    PairMasks masks(pts, fam);
    RegularityResult res = partition_homogeneous(pts, fam, eps, opts, &masks);
    HomogeneityReport rep = verify_homogeneity(pts, fam, res.partition, masks);
    Json j = partition_json(res.partition);
    j["eps"] = rat_json(eps);
    j["r"] = rat_json(res.r);
    j["budget"] = res.cutting.budget;
    j["cells"] = res.cutting.cells.size();
    j["n"] = pts.size();
    j["residual_mass"] = rat_json(res.residual_mass);
    j["signature_classes"] = res.signature_classes;
    j["report"] = homogeneity_json(rep);
    if (a.equitable) {
        RefinedPartition ref = equitable_refine(pts, fam, res.partition, eps, &masks);
        Json e;
        e["K"] = ref.K;
        e["parts"] = ref.parts;
        e["bad_fraction"] = rat_json(ref.bad_fraction);
        e["retries"] = ref.retries;
        j["equitable"] = std::move(e);
    }
    emit(a.out, j);
    if (!a.csv.empty()) {
        std::ofstream csv(a.csv);
        if (!csv) throw input_error("cannot write " + a.csv);
        csv << "part,size\n";
        for (std::size_t i = 0; i < res.partition.parts.size(); ++i)
            csv << i << "," << res.partition.parts[i].size() << "\n";
    }
    if (!a.cutting_out.empty()) store_json(a.cutting_out, cutting_json(res.cutting));
    return kExitPass;
}

struct VerifyArgs {
    std::string points, relations, partition, out;
    std::string eps = "1/10";
};

int run_verify(const VerifyArgs& a) {
    PointSet pts = points_from_json(load_json(a.points));
    RelationFamily fam = family_from_json(load_json(a.relations));
    Partition part = partition_from_json(load_json(a.partition));
    Rat eps = parse_eps(a.eps);
    HomogeneityReport rep = verify_homogeneity(pts, fam, part);
    Json j = homogeneity_json(rep);
    j["schema"] = "sareg/homogeneity-report/v1";
    j["eps"] = rat_json(eps);
    j["within_eps"] = rep.within(eps);
    emit(a.out, j);
    return rep.within(eps) ? kExitPass : kExitFail;
}

struct LayeredArgs {
    std::size_t m = 2;
    std::string out;
};

int run_build_layered(const LayeredArgs& a) {
    auto [g, cert] = build_layered(a.m);
    Json j = colored_graph_json(g);
    j["m"] = a.m;
    j["certificate"] = certificate_json(cert);
    emit(a.out, j);
    return kExitPass;
}

struct CheckPqArgs {
    std::string graph, out;
    std::size_t p = 0, q = 0;
};

int run_check_pq(const CheckPqArgs& a) {
    ColoredGraph g = colored_graph_from_json(load_json(a.graph));
    PqResult res = verify_pq(g, a.p, a.q);
    Json j;
    j["schema"] = "sareg/pq-report/v1";
    j["p"] = a.p;
    j["q"] = a.q;
    j["pass"] = res.pass;
    if (!res.pass) j["witness"] = res.witness;
    emit(a.out, j);
    return res.pass ? kExitPass : kExitFail;
}

struct LayeredFindArgs {
    std::string graph, out, eps_override;
    std::size_t s = 1;
};

int run_layered_find(const LayeredFindArgs& a) {
    ColoredGraph g = colored_graph_from_json(load_json(a.graph));
    std::optional<Rat> override;
    if (!a.eps_override.empty()) override = parse_eps(a.eps_override);
    auto res = find_layered_set(g, a.s, override);
    Json j;
    j["schema"] = "sareg/layered-find/v1";
    j["s"] = a.s;
    j["found"] = res.has_value();
    if (res) {
        j["subset"] = res->subset;
        j["certificate"] = certificate_json(res->certificate);
    }
    emit(a.out, j);
    return res ? kExitPass : kExitFail;
}

struct RamseyArgs {
    std::string points, relations, out, targets;
};

int run_ramsey(const RamseyArgs& a) {
    PointSet pts = points_from_json(load_json(a.points));
    RelationFamily fam = family_from_json(load_json(a.relations));
    CliqueQuery q;
    q.family = std::move(fam);
    q.family.covering = true;
    std::stringstream ss(a.targets);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        long v = std::stol(tok);
        if (v < 2) throw input_error("targets must be at least 2");
        q.targets.push_back(static_cast<std::size_t>(v));
    }
    auto res = mono_clique_search(pts, q);
    Json j;
    j["schema"] = "sareg/ramsey/v1";
    j["targets"] = q.targets;
    j["found"] = res.has_value();
    if (res) {
        j["relation"] = res->relation;
        j["clique"] = res->clique;
    }
    emit(a.out, j);
    return res ? kExitPass : kExitFail;
}

struct DistancesArgs {
    std::string points, out, csv, pq;
    std::size_t audit_p = 0;
};

int run_distances(const DistancesArgs& a) {
    PointSet pts = points_from_json(load_json(a.points));
    DistanceProfile prof = distance_profile(pts);
    Json j;
    j["schema"] = "sareg/distances/v1";
    j["n"] = pts.size();
    j["m"] = prof.m();
    Json classes = Json::array();
    for (const auto& [d, pairs] : prof.classes)
        classes.push_back({{"squared_distance", rat_json(d)}, {"pairs", pairs.size()}});
    j["classes"] = std::move(classes);
    QuadRelation q = build_Q(pts);
    j["q_edges"] = q.edge_count;
    int exit = kExitPass;
    if (!a.pq.empty()) {
        auto comma = a.pq.find(',');
        if (comma == std::string::npos) throw input_error("--pq expects p,q");
        std::size_t p = std::stoul(a.pq.substr(0, comma));
        std::size_t qq = std::stoul(a.pq.substr(comma + 1));
        PqDistanceResult res = pq_distance_check(pts, p, qq);
        Json pj;
        pj["p"] = p;
        pj["q"] = qq;
        pj["pass"] = res.pass;
        if (!res.pass) pj["witness"] = res.witness;
        j["pq"] = std::move(pj);
        if (!res.pass) exit = kExitFail;
    }
    if (a.audit_p > 0) {
        DistanceBoundReport rep = distance_bound_audit(pts, a.audit_p);
        Json bj;
        bj["p"] = a.audit_p;
        bj["q_empty"] = rep.q_empty;
        if (!rep.q_empty) bj["bound"] = rat_json(rep.bound);
        bj["sum_squared_class_sizes"] = rat_json(rep.sum_squared_class_sizes);
        bj["holds"] = rep.holds;
        j["bound_audit"] = std::move(bj);
        if (!rep.holds) exit = kExitFail;
    }
    emit(a.out, j);
    if (!a.csv.empty()) {
        std::ofstream csv(a.csv);
        if (!csv) throw input_error("cannot write " + a.csv);
        csv << "squared_distance,pairs\n";
        for (const auto& [d, pairs] : prof.classes)
            csv << rat_to_string(d) << "," << pairs.size() << "\n";
    }
    return exit;
}

struct RtArgs {
    std::string family, out, audit_eps;
    std::size_t p = 2;
};

int run_rt(const RtArgs& a) {
    std::vector<Segment> segs = segments_from_json(load_json(a.family));
    RTGraph rt = compose_rt(segs, a.p);
    Json j;
    j["schema"] = "sareg/rt/v1";
    j["p"] = a.p;
    j["n"] = rt.n();
    j["edges"] = rt.graph.edges.size();
    j["triangle_free_validated"] = rt.triangle_free_validated;
    j["segments"] = segments_json(rt.segments);
    j["copy_of"] = rt.copy_of;
    auto clique = clique_number_exact(rt.graph);
    auto indep = independence_number_exact(rt.graph);
    if (clique) {
        j["clique_number"] = clique->size();
        j["clique_witness"] = *clique;
        j["k2p1_free"] = clique->size() < 2 * a.p - 1;
    } else {
        j["clique_number"] = "cap-exceeded";
    }
    if (indep) j["independence_number"] = indep->size();
    else j["independence_number"] = "cap-exceeded";
    if (!a.audit_eps.empty()) {
        Rat eps = parse_eps(a.audit_eps);
        RTAuditReport rep =
            rt_upper_audit(rt.encoded_points(), rt_semialgebraic(), rt.graph, a.p, eps);
        Json aj;
        aj["degraded"] = rep.degraded;
        if (rep.degraded) {
            aj["reason"] = rep.degraded_reason;
        } else {
            aj["K"] = rep.K;
            aj["total_edges"] = rep.total_edges;
            aj["intra_part_edges"] = rep.intra_part_edges;
            aj["nonhomogeneous_edges"] = rep.nonhomogeneous_edges;
            aj["remaining_edges"] = rep.remaining_edges;
            aj["turan_threshold"] = rat_json(rep.turan_threshold);
            aj["kp_found"] = rep.kp_found;
            if (rep.independent_part) {
                aj["independent_part"] = *rep.independent_part;
                aj["independent_part_size"] = rep.independent_part_size;
            }
            if (!rep.k2p_witness.empty()) aj["k2p_witness"] = rep.k2p_witness;
        }
        j["upper_audit"] = std::move(aj);
    }
    emit(a.out, j);
    return kExitPass;
}

struct AuditBoundArgs {
    std::string points, out;
    std::size_t p = 6;
};

int run_audit_bound(const AuditBoundArgs& a) {
    PointSet pts = points_from_json(load_json(a.points));
    DistanceBoundReport rep = distance_bound_audit(pts, a.p);
    Json j;
    j["schema"] = "sareg/bound-audit/v1";
    j["n"] = rep.n;
    j["m"] = rep.m;
    j["p"] = a.p;
    j["q_edges"] = rep.q_edges;
    j["q_empty"] = rep.q_empty;
    if (!rep.q_empty) j["bound"] = rat_json(rep.bound);
    j["sum_squared_class_sizes"] = rat_json(rep.sum_squared_class_sizes);
    j["holds"] = rep.holds;
    emit(a.out, j);
    return rep.holds ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-algebraic regularity, colorings and distance audits"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for any randomized subroutine (none currently)");

    PartitionArgs pa;
    auto* partition = app.add_subcommand("partition", "homogeneous regularity partition");
    partition->add_option("--points", pa.points, "point set JSON")->required();
    partition->add_option("--relations", pa.relations, "relation family JSON")->required();
    partition->add_option("--eps", pa.eps, "epsilon as num/den");
    partition->add_option("--out", pa.out, "output partition JSON (default stdout)");
    partition->add_option("--csv", pa.csv, "part-size CSV path");
    partition->add_option("--cutting-out", pa.cutting_out, "also emit the cutting as JSON");
    partition->add_option("--depth-cap", pa.depth_cap, "box refinement depth cap");
    partition->add_flag("--equitable", pa.equitable, "also emit the equitable refinement");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "exhaustive homogeneity audit of a partition");
    verify->add_option("--points", va.points)->required();
    verify->add_option("--relations", va.relations)->required();
    verify->add_option("--partition", va.partition)->required();
    verify->add_option("--eps", va.eps);
    verify->add_option("--out", va.out);

    LayeredArgs la;
    auto* buildl = app.add_subcommand("build-layered", "the doubling (p, log p) construction");
    buildl->add_option("-m,--m", la.m, "levels")->required();
    buildl->add_option("--out", la.out);

    CheckPqArgs ca;
    auto* checkpq = app.add_subcommand("check-pq", "exhaustive (p,q)-coloring verification");
    checkpq->add_option("--p", ca.p)->required();
    checkpq->add_option("--q", ca.q)->required();
    checkpq->add_option("graph", ca.graph, "colored graph JSON")->required();
    checkpq->add_option("--out", ca.out);

    LayeredFindArgs lf;
    auto* lfind = app.add_subcommand("layered-find", "search for an s-layered subset");
    lfind->add_option("--s", lf.s)->required();
    lfind->add_option("--eps-override", lf.eps_override);
    lfind->add_option("graph", lf.graph)->required();
    lfind->add_option("--out", lf.out);

    RamseyArgs ra;
    auto* ramsey = app.add_subcommand("ramsey", "monochromatic clique search");
    ramsey->add_option("--targets", ra.targets, "comma-separated clique sizes")->required();
    ramsey->add_option("--points", ra.points)->required();
    ramsey->add_option("--relations", ra.relations)->required();
    ramsey->add_option("--out", ra.out);

    DistancesArgs da;
    auto* dist = app.add_subcommand("distances", "distance classes, Q statistics, pq checks");
    dist->add_option("--points", da.points)->required();
    dist->add_option("--pq", da.pq, "p,q distance check");
    dist->add_option("--audit-bound", da.audit_p, "audit the distance inequality at this p");
    dist->add_option("--csv", da.csv, "class-size CSV path");
    dist->add_option("--out", da.out);

    RtArgs rt;
    auto* rtc = app.add_subcommand("rt", "compose the Ramsey-Turan construction");
    rtc->add_option("--p", rt.p)->required();
    rtc->add_option("--family", rt.family, "segment family JSON")->required();
    rtc->add_option("--audit", rt.audit_eps, "run the deletion-argument audit at this eps");
    rtc->add_option("--out", rt.out);

    AuditBoundArgs ab;
    auto* audit = app.add_subcommand("audit-bound", "distance-count lower bound audit");
    audit->add_option("--points", ab.points)->required();
    audit->add_option("--p", ab.p)->required();
    audit->add_option("--out", ab.out);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*partition) return run_partition(pa);
        if (*verify) return run_verify(va);
        if (*buildl) return run_build_layered(la);
        if (*checkpq) return run_check_pq(ca);
        if (*lfind) return run_layered_find(lf);
        if (*ramsey) return run_ramsey(ra);
        if (*dist) return run_distances(da);
        if (*rtc) return run_rt(rt);
        if (*audit) return run_audit_bound(ab);
    } catch (const sareg::partition_degraded& ex) {
        std::cerr << "degraded: " << ex.what() << "\n";
        return kExitDegraded;
    } catch (const sareg::cut_error& ex) {
        std::cerr << "degraded: " << ex.what() << "\n";
        return kExitDegraded;
    } catch (const sareg::input_error& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const std::exception& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
