#include "sqgcert/verifier.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sqgcert {

const std::vector<std::string>& input_names() {
    static const std::vector<std::string> v = {input::norm_e3,  input::inner_e3, input::norm_thetaA3,
                                               input::norm_e6,  input::min_itilde, input::gersh3,
                                               input::gersh6,   input::defect3,  input::defect6};
    return v;
}

const CertifiedInput* CertificateInputs::find(const std::string& name) const {
    auto it = values.find(name);
    return it == values.end() ? nullptr : &it->second;
}

void CertificateInputs::set(const std::string& name, const Interval& v, const std::string& source, bool flagged) {
    values[name] = CertifiedInput{v, source, flagged};
}

const LemmaRecord* CertificateReport::find(const std::string& name) const {
    for (const auto& r : records)
        if (r.name == name) return &r;
    return nullptr;
}

Interval vertex_h(const Interval& A, const Interval& B, const Interval& C, const Interval& x) {
    return A - x + B / (C - x);
}

namespace {

// (AC + B) / ((A+C)/2 + sqrt(((C-A)/2)^2 - B)), the cancellation free form
Interval vertex_root(const Interval& A, const Interval& B, const Interval& C) {
    const Interval half(0.5);
    const Interval disc = sqr((C - A) * half) - B;
    if (disc.hi() < 0) throw DomainError("negative discriminant");
    const Interval d = Interval::raw(std::fmax(disc.lo(), 0.0), disc.hi());
    return (A * C + B) / ((A + C) * half + sqrt(d));
}

}  // namespace

std::optional<Interval> vertex_lemma(const Interval& A, const Interval& B, const Interval& C) {
    if (A.lo() <= 0 || B.lo() < 0 || C.lo() <= 0) return std::nullopt;
    const Interval Ahi(A.hi()), Bhi(B.hi()), Clo(C.lo());
    const Interval sqrtB = sqrt(Bhi);
    if (!certainly_gt(Clo, Ahi + Interval(2.0) * sqrtB)) return std::nullopt;
    try {
        // worst case for the upper end: largest A and B, smallest C
        double x = vertex_root(Ahi, Bhi, Clo).hi();
        const double xm = (Clo - sqrtB).lo();
        double step = std::ldexp(std::fabs(x) + 1.0, -50);
        while (!(vertex_h(Ahi, Bhi, Clo, Interval(x)).hi() < 0.0)) {
            x += step;
            step *= 2;
            if (!(x < xm)) return std::nullopt;
        }
        // root is above A for any admissible data
        double lo = A.lo();
        if (std::isfinite(C.hi())) lo = std::fmax(lo, vertex_root(Interval(A.lo()), Interval(B.lo()), Interval(C.hi())).lo());
        return Interval(std::fmin(lo, x), x);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

const char* status_name(Status s) {
    switch (s) {
        case Status::pass: return "PASS";
        case Status::width_limited: return "FAIL width-limited";
        case Status::logic_failed: return "FAIL logic-failed";
        case Status::refuted: return "FAIL refuted";
        case Status::missing: return "FAIL missing-input";
    }
    return "?";
}

namespace {

const Interval& decimal(const std::string& s) {
    static thread_local std::map<std::string, Interval> cache;
    auto it = cache.find(s);
    if (it == cache.end()) it = cache.emplace(s, from_decimal(s)).first;
    return it->second;
}

using Inputs = std::vector<std::pair<std::string, Interval>>;

LemmaRecord make_record(const std::string& name, const Interval& certified, Sense sense, const std::string& bound,
                        Inputs inputs, std::vector<std::string> depends, bool one_sided, bool required = true) {
    LemmaRecord r;
    r.name = name;
    r.certified = certified;
    r.sense = sense;
    r.paper_bound = bound;
    r.inputs = std::move(inputs);
    r.depends = std::move(depends);
    r.one_sided = one_sided;
    r.required = required;
    const Interval& b = decimal(bound);
    r.pass = sense == Sense::below ? certainly_lt(certified, b) : certainly_gt(certified, b);
    return r;
}

LemmaRecord missing_record(const std::string& name, const std::string& bound, Sense sense, const std::string& why,
                           std::vector<std::string> depends = {}) {
    LemmaRecord r;
    r.name = name;
    r.paper_bound = bound;
    r.sense = sense;
    r.certified = Interval::entire();
    r.depends = std::move(depends);
    r.note = "missing input: " + why;
    return r;
}

Interval norm_Bsj_sq(const Geometry& geo) {
    // (1/sqrt(a - a beta))^2 (a - a beta)
    const Interval len = geo.a - geo.a * Interval(geo.beta);
    return sqr(Interval(1.0) / sqrt(len)) * len;
}

struct Lookup {
    const CertificateInputs& in;
    CertificateReport& out;
    std::string missing;

    std::optional<Interval> get(const std::string& name) {
        const CertifiedInput* c = in.find(name);
        if (!c) {
            if (missing.empty()) missing = name;
            return std::nullopt;
        }
        if (c->flagged) {
            out.flagged_leak = true;
            if (missing.empty()) missing = name + " (flagged)";
            return std::nullopt;
        }
        return c->value;
    }
};

}  // namespace

bool Composer::certify_norms() {
    Lookup L{in, out, {}};
    struct Item {
        const char* input;
        const char* name;
        const char* bound;
        Sense sense;
        bool one_sided;
    };
    // the defect interval bounds a Schur-type majorant, not the norm itself
    const Item items[] = {{input::norm_e3, "norm_e3", "0.0905", Sense::below, false},
                          {input::norm_thetaA3, "norm_thetaA3", "0.0629", Sense::below, false},
                          {input::norm_e6, "norm_e6", "0.0893", Sense::below, false},
                          {input::min_itilde, "min_itilde", "1.2655", Sense::above, false},
                          {input::gersh3, "gershgorin_m3", "-0.3125", Sense::above, true},
                          {input::gersh6, "gershgorin_m6", "-0.3121", Sense::above, true},
                          {input::defect3, "defect_m3", "0.1004", Sense::below, true},
                          {input::defect6, "defect_m6", "0.1179", Sense::below, true}};
    bool all = true;
    for (const Item& it : items) {
        L.missing.clear();
        auto v = L.get(it.input);
        if (!v) {
            out.records.push_back(missing_record(it.name, it.bound, it.sense, L.missing));
            all = false;
            continue;
        }
        auto r = make_record(it.name, *v, it.sense, it.bound, {{it.input, *v}}, {}, it.one_sided);
        if (std::string(it.input) == input::min_itilde && in.min_cell >= 0)
            r.note = "lowest cell " + std::to_string(in.min_cell) + " of " + std::to_string(in.N);
        out.records.push_back(std::move(r));
    }

    // |<e, B_sj>|; Cauchy-Schwarz when the grid is not aligned with B_sj
    L.missing.clear();
    if ((inner = L.get(input::inner_e3))) {
        inner_tag = input::inner_e3;
        out.records.push_back(
            make_record("inner_e3", *inner, Sense::below, "0.0101", {{input::inner_e3, *inner}}, {}, false));
    } else if (auto e = in.find(input::inner_e3) ? std::nullopt : L.get(input::norm_e3)) {
        inner = *e * sqrt(norm_Bsj_sq(Geometry()));
        inner_tag = "cauchy_schwarz";
        auto r = make_record("inner_e3", *inner, Sense::below, "0.0101", {{input::norm_e3, *e}}, {"norm_e3"}, true);
        r.note = "Cauchy-Schwarz bound ||e|| ||B_sj||";
        out.records.push_back(std::move(r));
    } else {
        out.records.push_back(missing_record("inner_e3", "0.0101", Sense::below, L.missing));
        all = false;
    }
    return all;
}

bool Composer::certify_ABC() {
    Lookup L{in, out, {}};
    const Interval lambda_star = decimal("0.3482");
    const Interval nB2 = norm_Bsj_sq(Geometry());
    auto e = L.get(input::norm_e3);
    auto th = L.get(input::norm_thetaA3);
    if (!e || !th || !inner) {
        if (L.missing.empty()) L.missing = "inner product bound";
        out.records.push_back(missing_record("A", "0.3583", Sense::below, L.missing, {"inner_e3"}));
        out.records.push_back(missing_record("sqrtB", "0.1534", Sense::below, L.missing, {"norm_e3", "norm_thetaA3"}));
        return false;
    }
    A = lambda_star + Interval(inner->hi()) / nB2;
    A = Interval::raw(std::fmax(lambda_star.lo(), A->lo()), A->hi());
    // ||Theta_A B +- e|| <= ||Theta_A B|| + ||e||, so only an upper end is known
    const Interval s = (Interval(e->hi()) + Interval(th->hi())) / sqrt(nB2);
    sqrtB = Interval(0.0, s.hi());
    B = Interval(0.0, sqr(Interval(s.hi())).hi());
    out.records.push_back(make_record("A", *A, Sense::below, "0.3583", {{"lambda_star", lambda_star}, {inner_tag, *inner}},
                                      {"inner_e3"}, true));
    out.records.push_back(make_record("sqrtB", *sqrtB, Sense::below, "0.1534",
                                      {{input::norm_e3, *e}, {input::norm_thetaA3, *th}}, {"norm_e3", "norm_thetaA3"},
                                      true));
    return true;
}

bool Composer::certify_cstar(int m) {
    Lookup L{in, out, {}};
    const std::string name = m == 3 ? "cstar_m3" : "cstar_m6";
    const char* bound = m == 3 ? "0.8526" : "0.8355";
    const std::string gname = m == 3 ? "gershgorin_m3" : "gershgorin_m6";
    const std::string dname = m == 3 ? "defect_m3" : "defect_m6";
    const std::vector<std::string> deps = {"min_itilde", gname, dname};
    auto I = L.get(input::min_itilde);
    auto g = L.get(m == 3 ? input::gersh3 : input::gersh6);
    auto d = L.get(m == 3 ? input::defect3 : input::defect6);
    if (!I || !g || !d) {
        out.records.push_back(missing_record(name, bound, Sense::above, L.missing, deps));
        return false;
    }
    // min I + gersh - defect, from the pessimistic endpoints
    const Interval c = Interval(I->lo()) + Interval(g->lo()) - Interval(d->hi());
    (m == 3 ? cstar3 : cstar6) = c;
    out.records.push_back(make_record(name, c, Sense::above, bound,
                                      {{input::min_itilde, *I},
                                       {m == 3 ? input::gersh3 : input::gersh6, *g},
                                       {m == 3 ? input::defect3 : input::defect6, *d}},
                                      deps, true));
    return true;
}

bool Composer::certify_lambda0() {
    const std::vector<std::string> deps = {"A", "sqrtB", "cstar_m3"};
    if (!A || !B || !cstar3) {
        out.records.push_back(missing_record("lambda0", "0.4117", Sense::below, "A, B or c*", deps));
        return false;
    }
    const Interval C(cstar3->lo());
    const Inputs ins = {{"A", *A}, {"B", *B}, {"cstar_m3", C}};
    auto l0 = vertex_lemma(*A, *B, C);
    if (!l0) {
        auto r = make_record("lambda0", Interval::entire(), Sense::below, "0.4117", ins, deps, true);
        r.note = "vertex lemma hypothesis C > A + 2 sqrt(B) not certified";
        out.records.push_back(std::move(r));
        return false;
    }
    lambda0 = *l0;
    auto r = make_record("lambda0", *l0, Sense::below, "0.4117", ins, deps, true);
    const Interval hx = vertex_h(Interval(A->hi()), Interval(B->hi()), C, Interval(l0->hi()));
    char buf[64];
    std::snprintf(buf, sizeof buf, "h(upper end) <= %.3g", hx.hi());
    r.note = buf;
    out.records.push_back(std::move(r));
    return true;
}

bool Composer::certify_itilde_gap() {
    Lookup L{in, out, {}};
    const std::vector<std::string> deps = {"min_itilde", "lambda0"};
    auto I = L.get(input::min_itilde);
    if (!I || !lambda0) {
        out.records.push_back(missing_record("itilde_minus_lambda0", "0.8526", Sense::above, "min I or lambda0", deps));
        return false;
    }
    const Interval gap = Interval(I->lo()) - Interval(lambda0->hi());
    auto r = make_record("itilde_minus_lambda0", gap, Sense::above, "0.8526",
                         {{input::min_itilde, *I}, {"lambda0", *lambda0}}, deps, true);
    // the summary list prints 0.8538 for the same quantity
    r.note = std::string("summary constant 0.8538 ") + (certainly_gt(gap, decimal("0.8538")) ? "cleared" : "not cleared");
    out.records.push_back(std::move(r));
    return true;
}

bool Composer::certify_lambda6() {
    Lookup L{in, out, {}};
    const Interval approx = decimal("0.573");
    if (!cstar6) {
        out.records.push_back(missing_record("lambda6_gap", "0.573", Sense::above, "c6*", {"cstar_m6"}));
    } else {
        auto r = make_record("lambda6_gap", *cstar6, Sense::above, "0.573", {{"cstar_m6", *cstar6}}, {"cstar_m6"}, true);
        r.note = "c6* above the approximate eigenvalue";
        out.records.push_back(std::move(r));
    }
    auto e6 = L.get(input::norm_e6);
    if (!e6) {
        out.records.push_back(missing_record("lambda6", "0.4837", Sense::above, L.missing, {"norm_e6", "lambda6_gap"}));
        return false;
    }
    const Interval l6 = approx - Interval(e6->hi());
    auto r = make_record("lambda6", l6, Sense::above, "0.4837", {{"lambda6_approx", approx}, {input::norm_e6, *e6}},
                         {"norm_e6", "lambda6_gap"}, true);
    const LemmaRecord* gate = out.find("lambda6_gap");
    if (r.pass && !(gate && gate->pass)) {
        r.pass = false;
        r.note = "gap hypothesis c6* > 0.573 not certified";
    }
    out.records.push_back(std::move(r));
    return cstar6.has_value();
}

bool Composer::certify_transversality_chain() {
    Lookup L{in, out, {}};
    auto e = L.get(input::norm_e3);
    struct Claim {
        const char* name;
        const char* bound;
    };
    const Claim claims[] = {{"gap_cstar_lambda0", "0.4409"}, {"chain_term1", "-0.01"}, {"chain_term2", "-0.002"},
                            {"chain_term3", "-0.013"},       {"chain_sum", "0"},       {"bbstar_gate", "0"},
                            {"bbstar", "0"}};
    const std::vector<std::string> deps = {"norm_e3", "inner_e3", "A", "sqrtB", "cstar_m3", "lambda0"};
    auto fail_rest = [&](int from, const std::string& why) {
        for (int i = from; i < 7; ++i) {
            auto r = missing_record(claims[i].name, claims[i].bound, Sense::above, why, deps);
            r.required = i >= 4;
            out.records.push_back(std::move(r));
        }
        return false;
    };
    if (!e || !inner || !A || !B || !sqrtB || !cstar3 || !lambda0) return fail_rest(0, "inputs of the chain");

    const Interval lambda_star = decimal("0.3482");
    const Interval l0(lambda0->hi());
    const Interval gap = Interval(cstar3->lo()) - l0;
    const Inputs base = {{"cstar_m3", *cstar3}, {"lambda0", *lambda0}};
    auto with = [&](Inputs extra) {
        auto v = base;
        v.insert(v.end(), extra.begin(), extra.end());
        return v;
    };
    auto rec = [&](const char* name, const Interval& v, const char* bound, bool required, Inputs ins) {
        out.records.push_back(make_record(name, v, Sense::above, bound, std::move(ins), deps, true, required));
    };

    rec("gap_cstar_lambda0", gap, "0.4409", false, base);
    if (!(gap.lo() > 0)) return fail_rest(1, "c* - lambda0 not positive");

    const Interval ratio = Interval(sqrtB->hi()) / Interval(gap.lo());
    const Interval r2 = sqr(ratio);
    // (lambda* - lambda_3) >= (lambda* - lambda_0); a positive value only helps
    Interval t1 = r2 * (lambda_star - l0);
    if (t1.lo() > 0) t1 = Interval(0.0);
    const Interval t2 = -(r2 * Interval(inner->hi()));
    const Interval t3 = Interval(-2.0) * ratio * Interval(e->hi());
    rec("chain_term1", t1, "-0.01", false, with({{"sqrtB", *sqrtB}, {"lambda_star", lambda_star}}));
    rec("chain_term2", t2, "-0.002", false, with({{"sqrtB", *sqrtB}, {inner_tag, *inner}}));
    rec("chain_term3", t3, "-0.013", false, with({{"sqrtB", *sqrtB}, {input::norm_e3, *e}}));
    const Interval sum = Interval(gap.lo()) + Interval(t1.lo()) + Interval(t2.lo()) + Interval(t3.lo());
    rec("chain_sum", sum, "0", true, with({{"sqrtB", *sqrtB}, {inner_tag, *inner}, {input::norm_e3, *e}}));

    // (C - A)/2 > sqrt(B), and the resulting positivity of <B3, B3*>
    const Interval gate = (Interval(cstar3->lo()) - Interval(A->hi())) * Interval(0.5) - Interval(sqrtB->hi());
    rec("bbstar_gate", gate, "0", true, {{"cstar_m3", *cstar3}, {"A", *A}, {"sqrtB", *sqrtB}});
    const Interval bb = Interval(1.0) - Interval(B->hi()) / sqr(Interval(gap.lo()));
    rec("bbstar", bb, "0", true, with({{"B", *B}}));
    return true;
}

namespace {

void classify(CertificateReport& r) {
    for (auto& rec : r.records) {
        if (rec.pass) {
            rec.status = Status::pass;
            continue;
        }
        bool upstream_failed = false;
        for (const auto& d : rec.depends) {
            const LemmaRecord* u = r.find(d);
            if (u && u != &rec && !u->pass) upstream_failed = true;
        }
        const bool straddles = overlaps(rec.certified, decimal(rec.paper_bound));
        const bool missing = !std::isfinite(rec.certified.lo()) && !std::isfinite(rec.certified.hi()) &&
                             rec.note.rfind("missing input", 0) == 0;
        if (upstream_failed || (straddles && !missing)) rec.status = Status::width_limited;
        else if (missing) rec.status = Status::missing;
        else if (!rec.one_sided) rec.status = Status::refuted;
        else rec.status = Status::logic_failed;
    }
}

}  // namespace

CertificateReport compose_certificate(const CertificateInputs& in) {
    CertificateReport out;
    out.provenance = in.provenance;
    Composer c(in, out);
    c.certify_norms();
    c.certify_ABC();
    c.certify_cstar(3);
    c.certify_lambda0();
    c.certify_itilde_gap();
    c.certify_cstar(6);
    c.certify_lambda6();
    c.certify_transversality_chain();
    classify(out);

    out.global_pass = !out.flagged_leak;
    for (const auto& r : out.records) {
        if (r.required && !r.pass) {
            out.global_pass = false;
            if (out.first_failure.empty()) out.first_failure = r.name;
        }
    }
    if (out.flagged_leak && out.first_failure.empty()) out.first_failure = "flagged integration";
    return out;
}

std::vector<std::string> monotone_audit(const CertificateInputs& in, double factor) {
    const CertificateReport base = compose_certificate(in);
    std::vector<std::string> violations;
    for (const auto& [name, value] : in.values) {
        CertificateInputs w = in;
        const Interval v = value.value;
        double pad = factor * v.width();
        if (!(pad > 0)) pad = factor * std::fmax(v.mag(), 1e-300);
        w.values[name].value = Interval::raw(rounding::down(v.lo() - pad), rounding::up(v.hi() + pad));
        const CertificateReport wide = compose_certificate(w);
        for (const auto& r : wide.records) {
            const LemmaRecord* b = base.find(r.name);
            if (b && !b->pass && r.pass) violations.push_back(r.name + " passes after widening " + name);
        }
        if (!base.global_pass && wide.global_pass) violations.push_back("global pass after widening " + name);
    }
    return violations;
}

std::string format_record(const LemmaRecord& r) {
    std::ostringstream os;
    char buf[128];
    std::snprintf(buf, sizeof buf, "[%.10g, %.10g]", r.certified.lo(), r.certified.hi());
    os << r.name << " " << buf << " " << (r.sense == Sense::below ? "< " : "> ") << r.paper_bound << " "
       << status_name(r.status) << (r.required ? "" : " (intermediate)") << (r.one_sided ? " bound" : " enclosure");
    os << " | inputs";
    for (const auto& [k, v] : r.inputs) {
        std::snprintf(buf, sizeof buf, " %s=[%.10g, %.10g]", k.c_str(), v.lo(), v.hi());
        os << buf;
    }
    if (!r.note.empty()) os << " | " << r.note;
    return os.str();
}

void write_certificate(const std::string& path, const CertificateReport& r) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    for (const auto& rec : r.records) f << format_record(rec) << "\n";
    f << "# summary\n";
    f << "global " << (r.global_pass ? "PASS" : "FAIL") << "\n";
    if (!r.first_failure.empty()) f << "first_failure " << r.first_failure << "\n";
    f << "flagged_leak " << (r.flagged_leak ? 1 : 0) << "\n";
    for (const auto& [k, v] : r.provenance) f << "provenance " << k << " " << v << "\n";
}

std::string sweep_file(const std::string& dir, Quantity q, int N) {
    return (std::filesystem::path(dir) / (std::string(quantity_name(q)) + "_N" + std::to_string(N) + ".txt")).string();
}

std::string defect_file(const std::string& dir, int m) {
    return (std::filesystem::path(dir) / ("defect_T" + std::to_string(m) + ".txt")).string();
}

void write_defect_report(const std::string& path, int m, const DefectMesh& mesh, const DefectResult& d) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "# defect m=%d mesh=%d,%d,%d worst=%d flagged=%d\n", m, mesh.n1, mesh.n2, mesh.n3, d.worst_cell,
                 d.flagged ? 1 : 0);
    for (size_t i = 0; i < d.row_sums.size(); ++i)
        std::fprintf(f, "%zu %.17g %.17g\n", i, d.row_sums[i].lo(), d.row_sums[i].hi());
    std::fclose(f);
}

DefectResult read_defect_report(const std::string& path, int m, DefectMesh* mesh_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    DefectResult d;
    DefectMesh mesh{0, 0, 0};
    std::string line;
    int file_m = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (std::sscanf(line.c_str(), "# defect m=%d mesh=%d,%d,%d", &file_m, &mesh.n1, &mesh.n2, &mesh.n3) != 4)
                throw std::runtime_error(path + ": malformed header");
            if (line.find("flagged=1") != std::string::npos) d.flagged = true;
            continue;
        }
        std::istringstream row(line);
        size_t k;
        std::string lo, hi;
        if (!(row >> k >> lo >> hi) || k != d.row_sums.size()) throw std::runtime_error(path + ": malformed line");
        d.row_sums.push_back(Interval(std::strtod(lo.c_str(), nullptr), std::strtod(hi.c_str(), nullptr)));
    }
    if (file_m != m) throw std::runtime_error(path + ": wrong m");
    const int n = mesh.n1 + mesh.n2 + mesh.n3;
    if (static_cast<int>(d.row_sums.size()) != n) throw std::runtime_error(path + ": wrong number of rows");
    const Mesh cells = Mesh::three_region(mesh.n1, mesh.n2, mesh.n3);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
        lo = std::fmax(lo, d.row_sums[i].lo());
        if (d.worst_cell < 0 || d.row_sums[i].hi() > hi) {
            hi = d.row_sums[i].hi();
            d.worst_cell = i;
            d.worst_cell_rho_t = cells.cell(i);
        }
    }
    d.bound = Interval(std::fmin(lo, hi), hi);
    if (mesh_out) *mesh_out = mesh;
    return d;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fs", s);
    return buf;
}

}  // namespace

CertificateInputs gather_inputs(const PipelineOptions& opts) {
    CertificateInputs in;
    in.N = opts.N;
    auto log = [&](const std::string& s) {
        if (opts.log) opts.log(s);
    };
    std::filesystem::create_directories(opts.out_dir);
    in.provenance["N"] = std::to_string(opts.N);
    in.provenance["abs_tol"] = std::to_string(opts.ctx.abs_tol);
    in.provenance["rel_tol"] = std::to_string(opts.ctx.rel_tol);
    in.provenance["budget"] = std::to_string(opts.ctx.max_elements);
    in.provenance["rule"] = opts.ctx.rule == Rule::gl2 ? "gl2" : "order0";
    in.provenance["defect_mesh"] = std::to_string(opts.mesh.n1) + "," + std::to_string(opts.mesh.n2) + "," +
                                   std::to_string(opts.mesh.n3);

    SweepOptions sw;
    sw.threads = opts.threads;
    for (Quantity q : {Quantity::ItildeMin, Quantity::E3, Quantity::ThetaA3, Quantity::E6}) {
        const std::string path = sweep_file(opts.out_dir, q, opts.N);
        GridEnclosures g;
        const auto t0 = std::chrono::steady_clock::now();
        if (opts.reuse && std::filesystem::exists(path)) {
            g = read_report(path);
            log(std::string("read ") + path);
        } else {
            g = eval_error_vector(OperatorQuantity::make(q), opts.N, opts.ctx, sw);
            write_report(path, g);
            in.provenance[std::string("time_") + quantity_name(q)] = fmt_seconds(seconds_since(t0));
            log(std::string(quantity_name(q)) + " done in " + fmt_seconds(seconds_since(t0)));
        }
        const bool flagged = g.any_flagged();
        const Interval whole = Interval::entire();
        switch (q) {
            case Quantity::ItildeMin: {
                const GridMinimum mn = grid_min(g);
                in.min_cell = mn.cell;
                in.set(input::min_itilde, flagged ? whole : mn.value, path, flagged);
                break;
            }
            case Quantity::E3:
                in.set(input::norm_e3, flagged ? whole : grid_l2_norm(g), path, flagged);
                if (!flagged) {
                    try {
                        in.set(input::inner_e3, grid_inner_Bsj(g), path);
                    } catch (const DomainError& err) {
                        in.provenance["inner_e3"] = err.what();
                    }
                }
                break;
            case Quantity::ThetaA3:
                in.set(input::norm_thetaA3, flagged ? whole : grid_l2_norm(g), path, flagged);
                break;
            case Quantity::E6:
                in.set(input::norm_e6, flagged ? whole : grid_l2_norm(g), path, flagged);
                break;
        }
    }

    for (int m : {3, 6}) {
        const std::string mpath = matrix_path(opts.matrix_dir, m);
        ProjectionMatrix M;
        try {
            M = load_matrix(mpath, m);
        } catch (const std::exception& err) {
            in.provenance["matrix_T" + std::to_string(m)] = std::string("load error: ") + err.what();
            log(std::string("cannot load ") + mpath + ": " + err.what());
            continue;
        }
        char sum[32];
        std::snprintf(sum, sizeof sum, "%016llx", static_cast<unsigned long long>(M.checksum()));
        in.provenance["matrix_T" + std::to_string(m)] = mpath + " fnv1a=" + sum;
        const GershgorinBound G = gershgorin_min(M, 1);
        in.set(m == 3 ? input::gersh3 : input::gersh6, G.lower, mpath + " disk " + std::to_string(G.disk));

        const std::string dpath = defect_file(opts.out_dir, m);
        DefectResult D;
        DefectMesh used = opts.mesh;
        const auto t0 = std::chrono::steady_clock::now();
        if (opts.reuse && std::filesystem::exists(dpath)) {
            D = read_defect_report(dpath, m, &used);
            log("read " + dpath);
        } else {
            D = op_norm_defect(M, opts.mesh, Geometry(), sw);
            write_defect_report(dpath, m, opts.mesh, D);
            in.provenance["time_defect_T" + std::to_string(m)] = fmt_seconds(seconds_since(t0));
            log("defect T" + std::to_string(m) + " done in " + fmt_seconds(seconds_since(t0)));
        }
        in.set(m == 3 ? input::defect3 : input::defect6, D.flagged ? Interval::entire() : D.bound, dpath, D.flagged);
    }
    return in;
}

CertificateReport full_certificate(const PipelineOptions& opts) {
    return compose_certificate(gather_inputs(opts));
}

}  // namespace sqgcert
