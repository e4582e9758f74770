#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqgcert/interval.hpp"
#include "sqgcert/operators.hpp"
#include "sqgcert/spectral.hpp"

namespace sqgcert {

// Names of the certified inputs the composition consumes.
namespace input {
inline constexpr const char* norm_e3 = "norm_e3";
inline constexpr const char* inner_e3 = "inner_e3";
inline constexpr const char* norm_thetaA3 = "norm_thetaA3";
inline constexpr const char* norm_e6 = "norm_e6";
inline constexpr const char* min_itilde = "min_itilde";
inline constexpr const char* gersh3 = "gersh3";
inline constexpr const char* gersh6 = "gersh6";
inline constexpr const char* defect3 = "defect3";
inline constexpr const char* defect6 = "defect6";
}  // namespace input

const std::vector<std::string>& input_names();

struct CertifiedInput {
    Interval value;
    std::string source;  // file or computation it came from
    bool flagged = false;
};

struct CertificateInputs {
    std::map<std::string, CertifiedInput> values;
    int N = 0;
    int min_cell = -1;  // cell of the smallest I tilde lower bound
    std::map<std::string, std::string> provenance;

    const CertifiedInput* find(const std::string& name) const;
    void set(const std::string& name, const Interval& v, const std::string& source, bool flagged = false);
};

enum class Sense { below, above };  // certified hi < bound, or certified lo > bound

// Why a record failed. width_limited: an upstream record failed or the bound
// lies inside the enclosure; logic_failed: every upstream record passed and a
// one-sided bound still misses; refuted: a two-sided enclosure of the quantity
// lies entirely on the wrong side; missing: an input was never provided.
enum class Status { pass, width_limited, logic_failed, refuted, missing };
const char* status_name(Status s);

struct LemmaRecord {
    std::string name;
    std::vector<std::pair<std::string, Interval>> inputs;
    Interval certified;
    std::string paper_bound;  // decimal as printed
    Sense sense = Sense::below;
    bool pass = false;
    Status status = Status::missing;
    bool required = true;
    // certified is only a bound on the quantity, not an enclosure of it
    bool one_sided = false;
    std::vector<std::string> depends;  // upstream records
    std::string note;
};

struct CertificateReport {
    std::vector<LemmaRecord> records;
    bool global_pass = false;
    bool flagged_leak = false;
    std::string first_failure;
    std::map<std::string, std::string> provenance;

    const LemmaRecord* find(const std::string& name) const;
};

// lambda_0 = (C+A)/2 - sqrt(((C-A)/2)^2 - B), the smaller root of
// h(x) = A - x + B/(C-x). Returns an enclosure whose upper end x satisfies
// x < C.lo and h(x) < 0 for every A, B, C in the inputs; absent when
// C.lo > A.hi + 2 sqrt(B.hi) cannot be shown.
std::optional<Interval> vertex_lemma(const Interval& A, const Interval& B, const Interval& C);

// h evaluated in interval arithmetic
Interval vertex_h(const Interval& A, const Interval& B, const Interval& C, const Interval& x);

// The composition steps. Each appends its records and returns false when a
// required input is missing.
struct Composer {
    const CertificateInputs& in;
    CertificateReport& out;

    Composer(const CertificateInputs& in_, CertificateReport& out_) : in(in_), out(out_) {}

    bool certify_norms();
    bool certify_ABC();
    bool certify_cstar(int m);
    bool certify_lambda0();
    bool certify_itilde_gap();
    bool certify_lambda6();
    bool certify_transversality_chain();

    // derived quantities shared between steps
    std::optional<Interval> inner, A, B, sqrtB, cstar3, cstar6, lambda0;
    std::string inner_tag;
};

CertificateReport compose_certificate(const CertificateInputs& in);

// Widens each input by 10% (of its width, or of its magnitude for thin
// enclosures) and recomposes. Returns one message per record that went from
// FAIL to PASS; empty means the composition is monotone.
std::vector<std::string> monotone_audit(const CertificateInputs& in, double factor = 0.1);

void write_certificate(const std::string& path, const CertificateReport& r);
std::string format_record(const LemmaRecord& r);

struct PipelineOptions {
    int N = 512;
    ParameterSet ctx;
    DefectMesh mesh;
    std::string matrix_dir = "data";
    std::string out_dir = "out";
    int threads = 1;
    bool reuse = false;  // read per-cell files from out_dir instead of recomputing
    std::function<void(const std::string&)> log;
};

// Runs the sweeps (or reads them back), both Gershgorin bounds and both
// defects, and collects the inputs.
CertificateInputs gather_inputs(const PipelineOptions& opts);
CertificateReport full_certificate(const PipelineOptions& opts);

// File names inside the output directory.
std::string sweep_file(const std::string& dir, Quantity q, int N);
std::string defect_file(const std::string& dir, int m);

void write_defect_report(const std::string& path, int m, const DefectMesh& mesh, const DefectResult& d);
DefectResult read_defect_report(const std::string& path, int m, DefectMesh* mesh = nullptr);

}  // namespace sqgcert
