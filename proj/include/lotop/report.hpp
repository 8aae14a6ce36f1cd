#ifndef LOTOP_REPORT_HPP
#define LOTOP_REPORT_HPP

#include "lotop/relations.hpp"

#include <json.hpp>

namespace lotop {

using json = nlohmann::ordered_json;


json to_json(const Verdict& v);
json to_json(const Sight& s);
json to_json(const Certificate& c);
json to_json(const RelationCertificate& c);
json to_json(const SupportReport& r);

// {check, result, verdict, bounds, certificate?}
json check_json(const std::string& check, const std::string& result, const Verdict& v, const std::string& bounds,
                const std::optional<json>& certificate = std::nullopt);

} // namespace lotop

#endif
