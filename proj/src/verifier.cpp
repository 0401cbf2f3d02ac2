#include "liftsub/verifier.hpp"

#include "liftsub/json_io.hpp"

namespace liftsub {

using nlohmann::json;

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::InvalidVertex: return "invalid vertex";
    case ViolationKind::BranchCollision: return "branch collision";
    case ViolationKind::MissingPair: return "missing pair";
    case ViolationKind::UnexpectedPair: return "unexpected pair";
    case ViolationKind::WrongEndpoints: return "wrong endpoints";
    case ViolationKind::DegeneratePath: return "degenerate path";
    case ViolationKind::MissingEdge: return "missing edge";
    case ViolationKind::ReusedInternalVertex: return "reused internal vertex";
    case ViolationKind::InternalIsBranch: return "internal vertex is a branch vertex";
  }
  return "unknown";
}

std::string serialize_certificate(const SubdivisionCertificate& cert) {
  json doc;
  doc["branch"] = to_json_value(cert.branch);
  json paths = json::object();
  for (const auto& [key, path] : cert.paths) paths[pair_key(key.first, key.second)] = to_json_value(path);
  doc["paths"] = std::move(paths);
  return doc.dump() + "\n";
}

SubdivisionCertificate deserialize_certificate(std::string_view text) {
  json doc = parse_document(text);
  // Build outcome files wrap the certificate.
  if (doc.is_object() && doc.contains("certificate") && !doc.contains("branch")) doc = doc["certificate"];
  if (!doc.is_object()) throw ParseError("<document>", "expected a certificate object");
  if (!doc.contains("branch")) throw ParseError("branch", "missing");
  if (!doc.contains("paths") || !doc["paths"].is_object()) throw ParseError("paths", "expected an object");

  SubdivisionCertificate cert;
  cert.branch = vertices_from_json(doc["branch"], "branch");
  for (const auto& [key, value] : doc["paths"].items()) {
    const auto ij = parse_pair_key(key);
    if (!ij) throw ParseError("paths." + key, "key is not of the form i-j");
    cert.paths[*ij] = vertices_from_json(value, "paths." + key);
  }
  return cert;
}

}  // namespace liftsub
