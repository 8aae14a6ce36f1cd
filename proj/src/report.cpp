#include "lotop/report.hpp"

namespace lotop {

json to_json(const Verdict& v)
{
    json j{{"kind", kind_name(v.kind)}};
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

json to_json(const Sight& s)
{
    if (s.is_nil()) return "Nil";
    json children = json::object();
    for (const auto& [a, c] : s.children()) children[a.str()] = to_json(c);
    return children;
}

json to_json(const Certificate& c)
{
    json j;
    j["kind"] = c.kind == Certificate::Kind::Dedicated ? "dedicated" : "supporting";
    j["theta"] = c.theta.to_string();
    j["p"] = c.p.to_string();
    if (c.sight) j["sight"] = c.sight->to_string();
    if (c.implicit) {
        j["tree"] = c.implicit->descriptor;
        j["depth_bound"] = c.implicit->depth_bound;
        j["support_bounds"] = describe(c.support);
    }
    if (c.kind == Certificate::Kind::Dedicated) j["z"] = c.z.str();
    if (c.w) {
        j["w"] = c.w->label();
        if (c.w->code()) j["w_code"] = c.w->code()->str();
    }
    j["fuel"] = c.fuel;
    return j;
}

json to_json(const RelationCertificate& c)
{
    json j;
    j["kind"] = kind_name(c.kind);
    if (c.realizer) j["realizer"] = c.realizer->str();
    if (!c.mo_evidence.empty()) {
        json arr = json::array();
        for (const auto& [a, b] : c.mo_evidence) arr.push_back({{"A", a.to_string()}, {"B", b.to_string()}});
        j["mo_evidence"] = arr;
    }
    if (!c.lo_evidence.empty()) {
        json arr = json::array();
        for (const auto& [n, cert] : c.lo_evidence) arr.push_back({{"n", n.str()}, {"certificate", to_json(cert)}});
        j["lo_evidence"] = arr;
    }
    if (c.kind == RelationCertificate::Kind::NotLeqLoByIP) {
        j["n"] = c.n;
        json w = json::array();
        for (const auto& s : c.witness) w.push_back(s.to_string());
        j["witness"] = w;
        if (c.left) j["left"] = c.left->label();
        if (c.right) j["right"] = c.right->label();
        j["right_has_ip"] = to_json(c.ip_evidence);
    }
    j["bounds"] = describe(c.bounds);
    return j;
}

json to_json(const SupportReport& r)
{
    return {{"verdict", to_json(r.verdict)},
            {"nodes_checked", r.nodes_checked},
            {"leaves_checked", r.leaves_checked},
            {"exhaustive", r.exhaustive}};
}

json check_json(const std::string& check, const std::string& result, const Verdict& v, const std::string& bounds,
                const std::optional<json>& certificate)
{
    json j{{"check", check}, {"result", result}, {"verdict", to_json(v)}, {"bounds", bounds}};
    if (certificate) j["certificate"] = *certificate;
    return j;
}

} // namespace lotop
