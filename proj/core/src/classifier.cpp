#include "phaseport/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "phaseport/compactify.hpp"

#include "json.hpp"

namespace phaseport {

namespace {

// branch-condition mini-parser so the table below reads like the print
std::vector<Atom> branch_atoms(const std::string& spec) {
    std::vector<Atom> out;
    std::stringstream ss(spec);
    std::string tok;
    auto atom = [](Qty q, Rel r, const Rational& rhs, bool implicit = false) {
        return Atom{q, r, rhs, implicit};
    };
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok == "mu<-2") out.push_back(atom(Qty::Mu, Rel::LT, -2));
        else if (tok == "mu=-2") out.push_back(atom(Qty::Mu, Rel::EQ, -2));
        else if (tok == "-2<mu<-1") {
            out.push_back(atom(Qty::Mu, Rel::GT, -2));
            out.push_back(atom(Qty::Mu, Rel::LT, -1));
        } else if (tok == "-1<mu<0") {
            out.push_back(atom(Qty::Mu, Rel::GT, -1));
            out.push_back(atom(Qty::Mu, Rel::LT, 0));
        } else if (tok == "mu=0") {
            out.push_back(atom(Qty::Mu, Rel::EQ, 0));
            out.push_back(atom(Qty::C1, Rel::NE, 0, true));  // implicit: c1=0, mu=0 sits in the c1=0 row
        } else if (tok == "mu>0") out.push_back(atom(Qty::Mu, Rel::GT, 0));
        else if (tok == "mu<-1") out.push_back(atom(Qty::Mu, Rel::LT, -1));
        else if (tok == "mu>-1") out.push_back(atom(Qty::Mu, Rel::GT, -1));
        else if (tok == "c1=0") out.push_back(atom(Qty::C1, Rel::EQ, 0));
        else if (tok == "apc>0") out.push_back(atom(Qty::Apc, Rel::GT, 0));
        else if (tok == "apc<0") out.push_back(atom(Qty::Apc, Rel::LT, 0));
        else throw std::logic_error("bad branch token: " + tok);
    }
    return out;
}

constexpr auto Sad = LocalType::Saddle;
constexpr auto StN = LocalType::StableNode;
constexpr auto UnN = LocalType::UnstableNode;

std::vector<Table8Row> build_table8() {
    std::vector<Table8Row> rows;
    int id = 0;
    auto add = [&](const char* sub, const char* branch, int o1, LocalType o2, const char* g) {
        rows.push_back(Table8Row{id++, sub, branch, branch_atoms(branch), o1, o2, g});
    };

    add("1.1", "", 12, UnN, "G1");
    add("1.2", "", 3, StN, "G2");
    add("1.3", "mu<-1", 8, Sad, "G3");
    add("1.3", "-1<mu<0", 13, UnN, "G4");
    add("1.4", "mu<-2", 1, Sad, "G5");
    add("1.4", "-1<mu<0", 4, Sad, "G7");   // printed; see errata (O2 and G both suspect)
    add("1.4", "-2<mu<-1", 15, Sad, "G7");
    add("1.4", "mu=-2", 17, Sad, "G8");
    add("1.5", "", 12, UnN, "G9");
    add("1.6", "", 3, StN, "G10");
    add("1.7", "-1<mu<0", 10, StN, "G11");
    add("1.7", "mu<-1", 11, Sad, "G12");
    add("1.8", "mu<-2", 2, Sad, "G13");
    add("1.8", "-1<mu<0", 7, UnN, "G14");
    add("1.8", "-2<mu<-1", 16, Sad, "G15");
    add("1.8", "mu=-2", 18, Sad, "G16");
    add("1.9", "", 9, StN, "G19");
    add("1.10", "", 6, UnN, "G20");
    add("1.11", "", 12, UnN, "G17");
    add("1.12", "mu<-1", 8, Sad, "G21");
    add("1.12", "-1<mu<0", 13, UnN, "G22");
    add("1.13", "", 3, StN, "G18");
    add("1.14", "mu<-2", 1, Sad, "G23");
    add("1.14", "-1<mu<0", 4, StN, "G24");
    add("1.14", "-2<mu<-1", 15, Sad, "G25");
    add("1.14", "mu=-2", 17, Sad, "G26");
    add("1.15", "", 12, UnN, "G27");
    add("1.16", "mu<-1", 8, Sad, "G35");
    add("1.16", "-1<mu<0", 13, UnN, "G36");
    add("1.17", "", 3, StN, "G28");
    add("1.18", "mu<-2", 1, Sad, "G37");
    add("1.18", "-1<mu<0", 4, StN, "G38");
    add("1.18", "-2<mu<-1", 15, Sad, "G39");
    add("1.18", "mu=-2", 17, Sad, "G40");
    add("1.19", "-1<mu<0", 10, Sad, "G29");  // printed; see errata (O2)
    add("1.19", "mu<-1", 11, Sad, "G30");
    add("1.20", "mu<-2", 2, Sad, "G31");
    add("1.20", "-1<mu<0", 7, UnN, "G32");
    add("1.20", "-2<mu<-1", 16, Sad, "G33");
    add("1.20", "mu=-2", 18, Sad, "G34");

    add("2.1", "", 46, StN, "G41");
    add("2.2", "", 47, UnN, "G42");
    add("2.3", "mu=0", 14, UnN, "G43");
    add("2.3", "c1=0,mu>-1", 36, UnN, "G43");
    add("2.3", "c1=0,mu<-1", 43, Sad, "G44");
    add("2.4", "mu=0", 5, StN, "G45");
    add("2.4", "c1=0,mu>-1", 35, StN, "G46");
    add("2.4", "c1=0,mu<-1", 39, Sad, "G47");
    add("2.5", "mu=0", 14, UnN, "G48");
    add("2.5", "c1=0,mu>-1", 45, UnN, "G48");
    add("2.5", "c1=0,mu<-1", 44, Sad, "G49");
    add("2.6", "mu=0", 5, StN, "G50");
    add("2.6", "c1=0,mu>-1", 38, StN, "G51");
    add("2.6", "c1=0,mu<-1", 41, Sad, "G52");
    add("2.7", "mu>-1", 37, StN, "G53");
    add("2.7", "mu<-1", 40, Sad, "G54");
    add("2.8", "mu>-1", 34, UnN, "G55");
    add("2.8", "mu<-1", 42, Sad, "G56");
    add("2.9", "mu=0", 14, UnN, "G57");
    add("2.9", "c1=0,mu>-1", 24, UnN, "G57");
    add("2.9", "c1=0,mu<-1", 26, Sad, "G58");
    add("2.10", "mu=0", 5, StN, "G59");
    add("2.10", "c1=0,mu>-1", 23, StN, "G60");
    add("2.10", "c1=0,mu<-1", 25, Sad, "G61");

    add("3.1", "", 12, UnN, "G62");
    add("3.2", "mu>0", 6, UnN, "G63");
    add("3.2", "mu<-1", 8, StN, "G64");  // printed; see errata (O2: the §7 text says saddle)
    add("3.2", "-1<mu<0", 13, UnN, "G65");
    add("3.3", "mu>0", 3, StN, "G66");
    add("3.3", "mu<-1", 11, StN, "G68");  // printed; see errata (O2)
    add("3.3", "-1<mu<0", 10, StN, "G67");
    add("3.4", "mu<-2", 1, Sad, "G69");
    add("3.4", "-1<mu<0", 4, StN, "G70");
    add("3.4", "-2<mu<-1", 15, Sad, "G71");
    add("3.4", "mu=-2", 17, Sad, "G72");
    add("3.5", "mu>0", 3, StN, "G7");  // printed; see errata (G: suspected G73)
    add("3.5", "-1<mu<0", 10, StN, "G74");
    add("3.5", "mu<-1", 11, Sad, "G75");
    add("3.6", "", 12, UnN, "G76");
    add("3.7", "mu<-1", 8, Sad, "G77");
    add("3.7", "-1<mu<0", 13, UnN, "G78");
    add("3.8", "", 3, StN, "G79");
    add("3.9", "mu<-2", 1, Sad, "G80");
    add("3.9", "-1<mu<0", 4, StN, "G81");
    add("3.9", "-2<mu<-1", 15, Sad, "G82");
    add("3.9", "mu=-2", 17, Sad, "G83");

    add("4.1", "mu=0", 14, UnN, "G84");
    add("4.1", "c1=0,mu>-1,apc>0", 29, UnN, "G84");
    add("4.1", "c1=0,mu>-1,apc<0", 30, UnN, "G85");
    add("4.1", "c1=0,mu<-1", 33, Sad, "G86");
    add("4.2", "mu=0", 5, StN, "G87");
    add("4.2", "c1=0,mu>-1,apc>0", 27, StN, "G88");
    add("4.2", "c1=0,mu>-1,apc<0", 28, StN, "G89");
    add("4.2", "c1=0,mu<-1,apc>0", 31, Sad, "G90");
    add("4.2", "c1=0,mu<-1,apc<0", 32, Sad, "G91");
    add("4.3", "mu=0", 14, UnN, "G92");
    add("4.3", "c1=0,mu>-1", 20, UnN, "G92");
    add("4.3", "c1=0,mu<-1", 22, Sad, "G93");
    add("4.4", "mu=0", 5, StN, "G94");
    add("4.4", "c1=0,mu>-1", 19, StN, "G95");
    add("4.4", "c1=0,mu<-1", 21, Sad, "G96");

    add("5.1", "mu>0", 3, StN, "G97");
    add("5.1", "-1<mu<0", 10, StN, "G98");
    add("5.1", "mu<-1", 11, Sad, "G99");
    add("5.2", "", 12, UnN, "G76");
    add("5.3", "mu>0", 6, UnN, "G100");
    add("5.3", "mu<-1", 8, Sad, "G77");
    add("5.3", "-1<mu<0", 13, UnN, "G78");
    add("5.4", "mu>0", 3, StN, "G79");
    add("5.4", "-1<mu<0", 10, StN, "G101");
    add("5.4", "mu<-1", 11, Sad, "G102");
    add("5.5", "mu<-2", 1, Sad, "G80");
    add("5.5", "-1<mu<0", 4, StN, "G81");
    add("5.5", "-2<mu<-1", 15, Sad, "G82");
    add("5.5", "mu=-2", 17, Sad, "G83");

    add("6.1", "mu=0", 14, UnN, "G92");
    add("6.1", "c1=0,mu>-1", 20, UnN, "G92");
    add("6.1", "c1=0,mu<-1", 22, Sad, "G93");
    add("6.2", "mu=0", 5, StN, "G94");
    add("6.2", "c1=0,mu>-1", 19, StN, "G95");
    add("6.2", "c1=0,mu<-1", 21, Sad, "G96");

    return rows;
}

std::vector<ErratumNote> build_errata() {
    return {
        {"1.4", "-1<mu<0", "O2", "saddle", "stable node",
         "c2>0 and mu>-1 give a stable node at the origin of U2; sibling rows 1.14 and 1.18 "
         "print exactly that for the same branch"},
        {"1.4", "-1<mu<0", "G", "G7", "G6",
         "G7 is printed three times while G6 [R=4,S=17] appears only in the figure; the 1.14 "
         "pair G24/G25 shifts (R,S) by (-2,-2) between these mu branches, matching G6 vs G7"},
        {"3.5", "mu>0", "G", "G7", "G73",
         "G73 [R=6,S=17] appears only in the figure; the sibling row 3.5 with mu in (-1,0) is "
         "G74 [R=6,S=17]"},
        {"1.19", "-1<mu<0", "O2", "saddle", "stable node",
         "c2>0 and mu>-1 give a stable node at the origin of U2; compare row 1.7"},
        {"3.2", "mu<-1", "O2", "stable node", "saddle",
         "mu<-1 makes the origin of U2 a saddle; the Case 3.2 discussion in the text says "
         "saddle as well"},
        {"3.3", "mu<-1", "O2", "stable node", "saddle", "mu<-1 makes the origin of U2 a saddle"},
    };
}

const std::map<std::string, std::pair<int, int>>& caption_map() {
    static const std::map<std::string, std::pair<int, int>> captions = {
        {"G1", {8, 21}},  {"G2", {6, 19}},  {"G3", {5, 18}},  {"G4", {6, 19}},  {"G5", {5, 18}},
        {"G6", {4, 17}},  {"G7", {6, 19}},  {"G8", {7, 20}},  {"G9", {7, 20}},  {"G10", {6, 19}},
        {"G11", {6, 19}}, {"G12", {5, 18}}, {"G13", {5, 18}}, {"G14", {4, 17}}, {"G15", {6, 19}},
        {"G16", {7, 20}}, {"G17", {8, 23}}, {"G18", {6, 21}}, {"G19", {7, 22}}, {"G20", {6, 21}},
        {"G21", {5, 20}}, {"G22", {6, 21}}, {"G23", {5, 20}}, {"G24", {4, 19}}, {"G25", {6, 21}},
        {"G26", {7, 22}}, {"G27", {9, 24}}, {"G28", {7, 22}}, {"G29", {6, 21}}, {"G30", {6, 21}},
        {"G31", {5, 20}}, {"G32", {4, 19}}, {"G33", {6, 21}}, {"G34", {7, 22}}, {"G35", {5, 20}},
        {"G36", {6, 21}}, {"G37", {5, 20}}, {"G38", {5, 20}}, {"G39", {6, 21}}, {"G40", {7, 22}},
        {"G41", {8, 21}}, {"G42", {7, 20}}, {"G43", {6, 19}}, {"G44", {6, 19}}, {"G45", {4, 17}},
        {"G46", {6, 19}}, {"G47", {8, 21}}, {"G48", {6, 19}}, {"G49", {6, 19}}, {"G50", {5, 18}},
        {"G51", {6, 19}}, {"G52", {4, 17}}, {"G53", {6, 19}}, {"G54", {7, 20}}, {"G55", {4, 17}},
        {"G56", {6, 19}}, {"G57", {6, 17}}, {"G58", {6, 17}}, {"G59", {4, 15}}, {"G60", {4, 15}},
        {"G61", {6, 17}}, {"G62", {8, 21}}, {"G63", {6, 19}}, {"G64", {5, 18}}, {"G65", {6, 19}},
        {"G66", {7, 20}}, {"G67", {6, 19}}, {"G68", {6, 19}}, {"G69", {5, 18}}, {"G70", {5, 18}},
        {"G71", {6, 19}}, {"G72", {7, 20}}, {"G73", {6, 17}}, {"G74", {6, 17}}, {"G75", {5, 16}},
        {"G76", {6, 17}}, {"G77", {3, 14}}, {"G78", {4, 15}}, {"G79", {5, 16}}, {"G80", {3, 14}},
        {"G81", {3, 14}}, {"G82", {4, 15}}, {"G83", {5, 16}}, {"G84", {6, 17}}, {"G85", {5, 16}},
        {"G86", {6, 17}}, {"G87", {5, 16}}, {"G88", {4, 15}}, {"G89", {4, 15}}, {"G90", {4, 15}},
        {"G91", {5, 16}}, {"G92", {4, 13}}, {"G93", {4, 13}}, {"G94", {3, 12}}, {"G95", {2, 11}},
        {"G96", {2, 11}}, {"G97", {5, 14}}, {"G98", {4, 13}}, {"G99", {3, 12}}, {"G100", {5, 16}},
        {"G101", {4, 15}}, {"G102", {5, 16}},
    };
    return captions;
}

}  // namespace

const std::vector<Table8Row>& table8_rows() {
    static const std::vector<Table8Row> rows = build_table8();
    return rows;
}

const std::vector<ErratumNote>& errata() {
    static const std::vector<ErratumNote> notes = build_errata();
    return notes;
}

std::pair<int, int> g_caption(const std::string& g) {
    auto it = caption_map().find(g);
    if (it == caption_map().end()) throw std::out_of_range("unknown global label " + g);
    return it->second;
}

std::string errata_json() {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& e : errata()) {
        j.push_back({{"subcase", e.subcase},
                     {"branch", e.branch},
                     {"field", e.field},
                     {"printed", e.printed},
                     {"expected", e.expected},
                     {"note", e.note}});
    }
    return j.dump(2);
}

namespace {

std::vector<const ErratumNote*> errata_for(const std::string& subcase, const std::string& branch) {
    std::vector<const ErratumNote*> out;
    for (const auto& e : errata())
        if (e.subcase == subcase && e.branch == branch) out.push_back(&e);
    return out;
}

bool has_erratum(const std::string& subcase, const std::string& branch, const std::string& field) {
    for (const auto* e : errata_for(subcase, branch))
        if (e->field == field) return true;
    return false;
}

const Table8Row& match_table8(const KolmogorovParams& k, const std::string& subcase) {
    const Table8Row* match = nullptr;
    for (const auto& row : table8_rows()) {
        if (row.subcase != subcase) continue;
        if (!row_matches(k, row.branch_conditions)) continue;
        if (match != nullptr)
            throw NoMatchingRow("sub-rows '" + match->branch + "' and '" + row.branch +
                                "' of " + subcase + " both match " + k.to_string());
        match = &row;
    }
    if (match == nullptr)
        throw NoMatchingRow("no sub-row of " + subcase + " matches " + k.to_string());
    return *match;
}

}  // namespace

PortraitReport classify(const KolmogorovParams& raw) {
    if (sgn(raw.c2) == 0)
        throw DegenerateFamily("c2 = 0: two-dimensional Lotka-Volterra subfamily, out of scope");
    if (raw.mu == -1)
        throw DegenerateFamily("mu = -1: every point at infinity is singular, out of scope");

    PortraitReport rep;
    rep.input_params = raw;
    auto [k, ops] = normalize(raw);
    rep.params = k;
    rep.ops = ops;
    rep.hypothesis = check_hypotheses(k);
    if (!rep.hypothesis.satisfies_H2) {
        std::string msg = "H2 violated:";
        for (const auto& v : rep.hypothesis.violations) msg += " " + v;
        throw HypothesisViolation(msg);
    }

    FiniteClassification fin = classify_finite_closed_form(k);
    rep.case_label.major = fin.major_case;
    rep.case_label.subcase = fin.subcase;
    rep.finite_types = fin.types;

    rep.o1 = o1_label(k);
    rep.o2 = o2_classify(k);

    const Table8Row& row = match_table8(k, fin.subcase);
    rep.case_label.mu_branch = row.branch;
    rep.printed_o1 = row.o1;
    rep.printed_o2 = row.o2;
    rep.g_label = row.g;
    rep.caption = g_caption(row.g);
    for (const auto* e : errata_for(row.subcase, row.branch)) rep.row_errata.push_back(*e);

    if (rep.o1.tag != row.o1)
        throw CrossCheckMismatch("computed O1 label " + rep.o1.name() + " but row " + row.subcase +
                                 (row.branch.empty() ? "" : "/" + row.branch) + " prints L" +
                                 std::to_string(row.o1) + " for " + k.to_string());
    if (rep.o2 != row.o2 && !has_erratum(row.subcase, row.branch, "O2"))
        throw CrossCheckMismatch("computed O2 '" + local_type_name(rep.o2) + "' but row " +
                                 row.subcase + (row.branch.empty() ? "" : "/" + row.branch) +
                                 " prints '" + local_type_name(row.o2) + "' for " + k.to_string());
    return rep;
}

namespace {

double min_gap_to_others(const std::vector<DiscPoint>& pts, size_t self, double fallback) {
    double best = fallback;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i == self) continue;
        best = std::min(best, std::hypot(pts[i].x - pts[self].x, pts[i].y - pts[self].y));
    }
    return best;
}

}  // namespace

std::optional<std::string> divisor_types_mismatch(const KolmogorovParams& k) {
    ChartSystem u1 = to_chart(build_system(k), ChartId::U1);
    BlowupNode tree = desingularize(u1.system, 6);

    auto type_at = [](const BlowupNode& node, const Rational& w) -> std::optional<LocalType> {
        for (const auto& s : node.divisor_singularities)
            if (s.z.is_rational() && s.z.a() == w) return s.type;
        return std::nullopt;
    };

    if (sgn(k.c1) > 0) {
        // chain: U1 -> (first blow-up) -> (second blow-up)
        const BlowupNode& first = *tree.children.at(0);
        if (first.children.empty()) return "missing second blow-up at " + k.to_string();
        const BlowupNode& second = *first.children.at(0);
        const Rational q1w = -k.c2 / k.c1;
        if (k.mu == -2) {
            auto r = type_at(second, q1w);
            if (!r || *r != dicritical_r_published_type(k))
                return "dicritical divisor point type mismatch at " + k.to_string();
        } else {
            auto q0 = type_at(second, Rational(0));
            auto q1 = type_at(second, q1w);
            if (!q0 || *q0 != q0_published_type(k)) return "Q0 type mismatch at " + k.to_string();
            if (!q1 || *q1 != q1_published_type(k)) return "Q1 type mismatch at " + k.to_string();
        }
        return std::nullopt;
    }

    const BlowupNode& first = *tree.children.at(0);
    SPointTypes pub = s_points_published_types(k);
    std::optional<std::string> err;
    auto check = [&](const std::optional<LocalType>& want, const QuadExt& w, const char* name) {
        if (!want || err) return;
        for (const auto& s : first.divisor_singularities) {
            if ((s.z - w).is_zero()) {
                if (s.type != *want)
                    err = std::string(name) + " type mismatch at " + k.to_string() + ": generic " +
                          local_type_name(s.type) + " vs published " + local_type_name(*want);
                return;
            }
        }
        err = std::string(name) + " missing on the divisor at " + k.to_string();
    };
    check(pub.s0, QuadExt::from_rational(0), "S0");
    if (pub.s1 || pub.s2) {
        const Rational disc = k.disc();
        const Rational inv = Rational(1) / (2 * k.c0);
        check(pub.s1, QuadExt(-k.c3 * inv, -inv, disc), "S1");
        check(pub.s2, QuadExt(-k.c3 * inv, inv, disc), "S2");
    }
    if (pub.s3) check(pub.s3, QuadExt::from_rational(-k.c3 / (2 * k.c0)), "S3");
    if (pub.s4) check(pub.s4, QuadExt::from_rational(-k.c2 / k.c3), "S4");
    return err;
}

PortraitInputs portrait_inputs(const KolmogorovParams& k) {
    PortraitInputs in;
    in.params = k;
    in.finite = classify_finite_generic(k);
    in.o1 = o1_label(k);
    in.o2 = o2_classify(k);
    return in;
}

IndexLedger index_ledger(const KolmogorovParams& k) {
    PlanarSystem sys = build_system(k);
    std::vector<SingularPoint> pts = finite_points(k);

    std::vector<DiscPoint> plane;
    for (const auto& p : pts) plane.push_back({p.x.value(), p.z.value()});

    std::vector<std::pair<std::string, int>> fin;
    for (size_t i = 0; i < pts.size(); ++i) {
        double r = std::min(0.25, 0.45 * min_gap_to_others(plane, i, 1.0));
        fin.push_back({pts[i].label_string(),
                       winding_index(sys, plane[i].x, plane[i].y, std::max(r, 1e-3))});
    }

    // infinite points in their own charts
    ChartSystem u1 = to_chart(sys, ChartId::U1);
    ChartSystem u2 = to_chart(sys, ChartId::U2);
    double r1 = 0.2, r2 = 0.2;
    for (const auto& p : pts) {
        double x = p.x.value(), z = p.z.value();
        if (std::abs(x) > 1e-12) r1 = std::min(r1, 0.45 * std::abs(1.0 / x));
        if (std::abs(z) > 1e-12) r2 = std::min(r2, 0.45 * std::abs(1.0 / z));
    }
    std::vector<std::pair<std::string, int>> inf;
    inf.push_back({"O1", winding_index(u1.system, 0, 0, std::max(r1, 1e-3))});
    inf.push_back({"O2", winding_index(u2.system, 0, 0, std::max(r2, 1e-3))});
    return poincare_hopf_check(fin, inf);
}

PortraitReport full_report(const KolmogorovParams& raw, bool trace) {
    PortraitReport rep = classify(raw);
    const KolmogorovParams& k = rep.params;

    // generic finite pipeline against the closed-form row
    std::vector<SingularPoint> generic = classify_finite_generic(k);
    for (const auto& [labels, want] : rep.finite_types) {
        const SingularPoint* found = nullptr;
        for (const auto& p : generic) {
            if (p.labels.size() != labels.size()) continue;
            bool all = true;
            for (const auto& l : labels)
                if (!p.has_label(l)) all = false;
            if (all) {
                found = &p;
                break;
            }
        }
        if (found == nullptr)
            throw CrossCheckMismatch("closed-form point set lists " + labels.front() +
                                     " but the generic pipeline does not merge it that way at " +
                                     k.to_string());
        if (found->type != want)
            throw CrossCheckMismatch("finite point " + found->label_string() + ": generic '" +
                                     local_type_name(found->type) + "' vs table '" +
                                     local_type_name(want) + "' at " + k.to_string());
    }
    if (auto err = divisor_types_mismatch(k)) throw CrossCheckMismatch(*err);
    rep.generic_checked = true;

    rep.ledger = index_ledger(k);
    rep.ledger_done = true;

    if (trace) {
        PortraitInputs in;
        in.params = k;
        in.finite = generic;
        in.o1 = rep.o1;
        in.o2 = rep.o2;
        SeparatrixConfiguration config = trace_separatrices(in);
        count_regions(config);
        // map the traced geometry back through the normalization symmetries
        // so the report depicts the caller's system, not the normal form
        for (auto it = rep.ops.rbegin(); it != rep.ops.rend(); ++it) {
            double sx = 1, sy = 1;
            bool reverse_time = false;
            switch (it->kind) {
                case SymmetryKind::FlipX: sx = -1; break;
                case SymmetryKind::FlipZ: sy = -1; break;
                case SymmetryKind::TimeReverse:
                    sx = -1;
                    sy = -1;
                    reverse_time = true;
                    break;
            }
            auto transform = [&](std::vector<DiscPoint>& pl) {
                for (auto& p : pl) {
                    p.x *= sx;
                    p.y *= sy;
                }
                if (reverse_time) std::reverse(pl.begin(), pl.end());
            };
            for (auto& item : config.separatrices) transform(item.polyline);
            for (auto& orbit : config.region_orbits) transform(orbit);
            for (auto& p : config.region_samples) {
                p.x *= sx;
                p.y *= sy;
            }
        }
        rep.s_count = config.s_count;
        rep.r_count = config.r_count;
        rep.trace = std::move(config);
    }
    return rep;
}

std::vector<std::pair<const Table8Row*, KolmogorovParams>> enumerate_representatives() {
    const auto& rows = table8_rows();
    std::vector<std::optional<KolmogorovParams>> found(rows.size());

    auto consider = [&](const KolmogorovParams& k) {
        HypothesisReport rep = check_hypotheses(k);
        if (!rep.satisfies_H2) return;
        FiniteClassification fin;
        try {
            fin = classify_finite_closed_form(k);
        } catch (const NoMatchingRow&) {
            return;  // impossible under H1; partition tests cover it
        }
        for (size_t i = 0; i < rows.size(); ++i) {
            if (found[i] || rows[i].subcase != fin.subcase) continue;
            if (row_matches(k, rows[i].branch_conditions)) found[i] = k;
        }
    };

    const std::vector<Rational> a0s = {0, 1, 2, 3, Rational(1, 2)};
    const std::vector<Rational> c0s = {-3, -2, -1, Rational(-1, 2), 0, Rational(1, 2), 1, 2, 3};
    const std::vector<Rational> c1s = {0, 1, 2};
    const std::vector<Rational> c2s = {-2, -1, Rational(-1, 2), Rational(1, 2), 1, 2};
    const std::vector<Rational> c3s = {0, 1, 2, 3, 4};
    const std::vector<Rational> mus = {-4, -3,          -2, Rational(-3, 2), Rational(-5, 4),
                                       Rational(-1, 2), Rational(-1, 4),    0,
                                       Rational(1, 4),  Rational(1, 2),     1,
                                       2,               3};
    for (const auto& a0 : a0s)
        for (const auto& c0 : c0s)
            for (const auto& c1 : c1s)
                for (const auto& c2 : c2s)
                    for (const auto& c3 : c3s)
                        for (const auto& mu : mus)
                            consider({a0, c0, c1, c2, c3, mu});

    // c3^2 = 4 c0 c2 needs constructed triples (the grid almost never hits it)
    const std::vector<std::array<Rational, 3>> disc0 = {
        {Rational(1), Rational(1), Rational(2)},       {Rational(2), Rational(2), Rational(4)},
        {Rational(1), Rational(4), Rational(4)},       {Rational(4), Rational(1), Rational(4)},
        {Rational(1, 2), Rational(1, 2), Rational(1)}, {Rational(2), Rational(1, 2), Rational(2)},
        {Rational(1, 2), Rational(2), Rational(2)},    {Rational(-1), Rational(-1), Rational(2)},
        {Rational(-2), Rational(-2), Rational(4)},     {Rational(-1), Rational(-4), Rational(4)},
        {Rational(-4), Rational(-1), Rational(4)},     {Rational(-1, 2), Rational(-1, 2), Rational(1)},
        {Rational(-2), Rational(-1, 2), Rational(2)},  {Rational(-1, 2), Rational(-2), Rational(2)},
    };
    for (const auto& [c0, c2, c3] : disc0)
        for (const auto& a0 : a0s)
            for (const auto& c1 : c1s)
                for (const auto& mu : mus)
                    consider({a0, c0, c1, c2, c3, mu});

    std::vector<std::pair<const Table8Row*, KolmogorovParams>> out;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!found[i])
            throw WitnessNotFound("no witness found for row " + rows[i].subcase +
                                  (rows[i].branch.empty() ? "" : "/" + rows[i].branch));
        out.push_back({&rows[i], *found[i]});
    }
    return out;
}

std::string report_to_json(const PortraitReport& rep, bool pretty) {
    using json = nlohmann::ordered_json;
    json j;
    j["schema_version"] = 1;
    auto params_json = [](const KolmogorovParams& k) {
        return json{{"a0", format_rational(k.a0)}, {"c0", format_rational(k.c0)},
                    {"c1", format_rational(k.c1)}, {"c2", format_rational(k.c2)},
                    {"c3", format_rational(k.c3)}, {"mu", format_rational(k.mu)}};
    };
    j["input_params"] = params_json(rep.input_params);
    j["params"] = params_json(rep.params);
    json ops = json::array();
    for (const auto& op : rep.ops) ops.push_back(op.name());
    j["symmetry_ops"] = ops;
    j["hypotheses"] = {{"H", rep.hypothesis.satisfies_H},
                       {"H1", rep.hypothesis.satisfies_H1},
                       {"H2", rep.hypothesis.satisfies_H2},
                       {"violations", rep.hypothesis.violations}};
    j["case"] = rep.case_label.major;
    j["subcase"] = rep.case_label.subcase;
    if (!rep.case_label.mu_branch.empty()) j["mu_branch"] = rep.case_label.mu_branch;
    json fin = json::array();
    for (const auto& [labels, type] : rep.finite_types) {
        std::string name;
        for (size_t i = 0; i < labels.size(); ++i) name += (i ? "=" : "") + labels[i];
        fin.push_back({{"point", name}, {"type", local_type_name(type)}});
    }
    j["finite_points"] = fin;
    j["o1_label"] = rep.o1.name();
    j["o2_type"] = local_type_name(rep.o2);
    j["printed_o1"] = "L" + std::to_string(rep.printed_o1);
    j["printed_o2"] = local_type_name(rep.printed_o2);
    j["g_label"] = rep.g_label;
    j["caption_r"] = rep.caption.first;
    j["caption_s"] = rep.caption.second;
    if (!rep.row_errata.empty()) {
        json errs = json::array();
        for (const auto& e : rep.row_errata)
            errs.push_back({{"field", e.field}, {"printed", e.printed}, {"expected", e.expected},
                            {"note", e.note}});
        j["errata"] = errs;
    }
    j["generic_cross_checked"] = rep.generic_checked;
    if (rep.ledger_done) {
        json entries = json::array();
        for (const auto& e : rep.ledger.entries)
            entries.push_back({{"point", e.name},
                               {"at_infinity", e.at_infinity},
                               {"index", e.index},
                               {"weight", e.weight}});
        j["index_ledger"] = {{"entries", entries},
                             {"total", rep.ledger.total},
                             {"balanced", rep.ledger.balanced}};
    }
    if (rep.s_count) j["s"] = *rep.s_count;
    if (rep.r_count) j["r"] = *rep.r_count;
    return pretty ? j.dump(2) : j.dump();
}

}  // namespace phaseport
