#include "sympidx/path_json.hpp"

namespace sympidx {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::Schema, msg); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) schema(std::string("missing field '") + key + "'");
    return j.at(key);
}

double number(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number()) schema(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

int integer(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) schema(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

std::vector<PathSpec> children(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_array()) schema(std::string("field '") + key + "' must be an array");
    std::vector<PathSpec> out;
    for (const auto& c : v) out.push_back(path_spec_from_json(c));
    return out;
}

std::vector<PathSpec> one(const json& j) {
    std::vector<PathSpec> out;
    out.push_back(path_spec_from_json(field(j, "child")));
    return out;
}

json parse_document(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        schema(std::string("invalid JSON: ") + e.what());
    }
    const json& v = field(doc, "schema_version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) schema("unsupported schema_version");
    return doc;
}

json children_json(const std::vector<PathSpec>& c) {
    json a = json::array();
    for (const auto& s : c) a.push_back(path_spec_to_json(s));
    return a;
}

}  // namespace

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
        rows.push_back(r);
    }
    return rows;
}

Mat matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) schema("matrix must be a non-empty array of rows");
    const size_t n = j.size();
    const size_t c = j[0].is_array() ? j[0].size() : 0;
    Mat m(n, c);
    for (size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != c) schema("matrix rows must have equal length");
        for (size_t k = 0; k < c; ++k) {
            if (!j[i][k].is_number()) schema("matrix entries must be numbers");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
        }
    }
    return m;
}

json path_spec_to_json(const PathSpec& s) {
    json j;
    std::visit(overloaded{
                   [&](const RotationBody& b) {
                       j["type"] = "rotation";
                       j["weight"] = b.weight;
                   },
                   [&](const ShearBody& b) {
                       j["type"] = "shear";
                       j["slope"] = b.slope;
                   },
                   [&](const GeneratorBody& b) {
                       j["type"] = "generator";
                       j["coeffs"] = json::array();
                       for (const auto& c : b.coeffs) j["coeffs"].push_back(matrix_to_json(c));
                   },
                   [&](const DirectSumBody& b) {
                       j["type"] = "direct_sum";
                       j["children"] = children_json(b.children);
                   },
                   [&](const IterateBody& b) {
                       j["type"] = "iterate";
                       j["k"] = b.k;
                       j["child"] = path_spec_to_json(b.child.at(0));
                   },
                   [&](const InverseBody& b) {
                       j["type"] = "inverse";
                       j["child"] = path_spec_to_json(b.child.at(0));
                   },
                   [&](const ConcatenateBody& b) {
                       j["type"] = "concatenate";
                       j["children"] = children_json(b.children);
                   },
                   [&](const LoopMultiplyBody& b) {
                       j["type"] = "loop_multiply";
                       j["weights"] = b.weights;
                       j["child"] = path_spec_to_json(b.child.at(0));
                   },
                   [&](const HalfPeriodExtendBody& b) {
                       j["type"] = "half_period_extend";
                       j["child"] = path_spec_to_json(b.child.at(0));
                   },
                   [&](const ProductBody& b) {
                       j["type"] = "product";
                       j["children"] = children_json(b.children);
                   },
                   [&](const ConjugateBody& b) {
                       j["type"] = "conjugate";
                       j["matrix"] = matrix_to_json(b.c);
                       j["child"] = path_spec_to_json(b.child.at(0));
                   },
               },
               s.body);
    j["duration"] = s.duration;
    return j;
}

PathSpec path_spec_from_json(const json& j) {
    const json& t = field(j, "type");
    if (!t.is_string()) schema("field 'type' must be a string");
    const std::string type = t.get<std::string>();
    PathSpec s;
    s.duration = number(j, "duration");
    if (type == "rotation") {
        s.body = RotationBody{number(j, "weight")};
    } else if (type == "shear") {
        s.body = ShearBody{number(j, "slope")};
    } else if (type == "generator") {
        const json& c = field(j, "coeffs");
        if (!c.is_array()) schema("field 'coeffs' must be an array of matrices");
        GeneratorBody g;
        for (const auto& m : c) g.coeffs.push_back(matrix_from_json(m));
        s.body = std::move(g);
    } else if (type == "direct_sum") {
        s.body = DirectSumBody{children(j, "children")};
    } else if (type == "iterate") {
        s.body = IterateBody{one(j), integer(j, "k")};
    } else if (type == "inverse") {
        s.body = InverseBody{one(j)};
    } else if (type == "concatenate") {
        s.body = ConcatenateBody{children(j, "children")};
    } else if (type == "loop_multiply") {
        const json& w = field(j, "weights");
        if (!w.is_array()) schema("field 'weights' must be an array of integers");
        std::vector<int> ws;
        for (const auto& x : w) {
            if (!x.is_number_integer()) schema("loop weights must be integers");
            ws.push_back(x.get<int>());
        }
        s.body = LoopMultiplyBody{std::move(ws), one(j)};
    } else if (type == "half_period_extend") {
        s.body = HalfPeriodExtendBody{one(j)};
    } else if (type == "product") {
        s.body = ProductBody{children(j, "children")};
    } else if (type == "conjugate") {
        s.body = ConjugateBody{matrix_from_json(field(j, "matrix")), one(j)};
    } else {
        schema("unknown path type '" + type + "'");
    }
    validate(s);
    return s;
}

std::string dump_path_document(const PathSpec& s) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["path"] = path_spec_to_json(s);
    return doc.dump(2);
}

PathSpec parse_path_document(const std::string& text) { return path_spec_from_json(field(parse_document(text), "path")); }

namespace {

json angle_map(const std::map<double, int>& m) {
    json a = json::array();
    for (const auto& [z, v] : m) a.push_back({{"angle", z}, {"value", v}});
    return a;
}

}  // namespace

json certificate_to_json(const IRTCertificate& c) {
    return {{"d", c.d}, {"k", c.k}, {"eta", c.eta}, {"ell0", c.ell0}, {"N", c.N}};
}

IRTCertificate certificate_from_json(const json& j) {
    IRTCertificate c;
    c.d = integer(j, "d");
    c.eta = number(j, "eta");
    c.ell0 = integer(j, "ell0");
    c.N = integer(j, "N");
    const json& k = field(j, "k");
    if (!k.is_array() || k.empty()) schema("field 'k' must be a non-empty array");
    for (const auto& v : k) {
        if (!v.is_number_integer() || v.get<int>() <= 0) schema("entries of 'k' must be positive integers");
        c.k.push_back(v.get<int>());
    }
    if (c.d <= 0 || c.ell0 <= 0 || c.N <= 0 || !(c.eta > 0)) schema("d, ell0, N and eta must be positive");
    return c;
}

std::string dump_certificate_document(const IRTCertificate& c) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["certificate"] = certificate_to_json(c);
    return doc.dump(2);
}

IRTCertificate parse_certificate_document(const std::string& text) {
    return certificate_from_json(field(parse_document(text), "certificate"));
}

json ledger_to_json(const IRTLedger& l) {
    json entries = json::array();
    for (const auto& e : l.entries)
        entries.push_back({{"path", e.path},
                           {"ell", e.ell},
                           {"mu_k_plus_ell", e.mu_k_plus},
                           {"mu_k_minus_ell", e.mu_k_minus},
                           {"mu_ell", e.mu_ell},
                           {"nu_ell", e.nu_ell},
                           {"mu_minus_ell", e.mu_minus_ell},
                           {"nu_k_minus_ell", e.nu_k_minus},
                           {"b_plus", e.b_plus},
                           {"b_minus", e.b_minus},
                           {"normal_form", e.normal_form},
                           {"defect_agrees", e.defect_agrees},
                           {"cond_ii", e.cond_ii},
                           {"cond_iii", e.cond_iii},
                           {"route2", e.route2}});
    return {{"precheck", l.precheck},
            {"precheck_failure", l.precheck_failure},
            {"mean_gap", l.mean_gap},
            {"cond_i", l.cond_i},
            {"entries", entries},
            {"route2_agrees", l.route2_agrees},
            {"passed", l.passed}};
}

json index_report_to_json(const IndexReport& r) {
    json split = json::array();
    for (const auto& [z, s] : r.splitting) split.push_back({{"angle", z}, {"plus", s.first}, {"minus", s.second}});
    return {{"mu", r.mu},
            {"mu_rs", r.mu_rs},
            {"mean", r.mean},
            {"nu", angle_map(r.nu_z)},
            {"eta", angle_map(r.eta_z)},
            {"bott", angle_map(r.bott)},
            {"bott_plus", angle_map(r.bott_plus)},
            {"splitting", split},
            {"defect", r.defect}};
}

json replay_to_json(const ReplayReport& r) {
    json orbits = json::array();
    for (const auto& o : r.orbits)
        orbits.push_back({{"name", o.name},
                          {"symmetric", o.symmetric},
                          {"hypothesis", o.hypothesis},
                          {"irt", {o.irt1, o.irt2, o.irt3, o.irt4, o.irt5, o.irt6}},
                          {"claim", o.claim},
                          {"route2", o.route2}});
    json windows = json::array();
    for (const auto& w : r.windows)
        windows.push_back({{"s", w.s},
                           {"level", w.level},
                           {"orbit", w.orbit},
                           {"bound1", w.bound1},
                           {"bound23", w.bound23},
                           {"pinned", w.pinned}});
    return {{"n", r.n},
            {"r1", r.r1},
            {"r2", r.r2},
            {"orbits", orbits},
            {"windows", windows},
            {"covered", r.covered},
            {"equations_hold", r.equations_hold},
            {"windows_consistent", r.windows_consistent},
            {"hypotheses_hold", r.hypotheses_hold},
            {"count_claimed", r.count_claimed},
            {"count_flag", r.count_flag}};
}

}  // namespace sympidx
