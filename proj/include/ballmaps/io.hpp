#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "ballmaps/invariance.hpp"
#include "ballmaps/realize.hpp"

namespace ballmaps {

using Json = nlohmann::json;

/// Malformed or inconsistent JSON input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json to_json(Complex c);
Json to_json(const Polynomial& p);
Json to_json(const RationalMap& f);
Json to_json(const HermitianForm& h);
Json to_json(const Matrix& m);
Json to_json(const ProperCertificate& c);
Json to_json(const Signature& s);
Json to_json(const TorusSubgroup& t);
Json to_json(const BlockPartition& b);
Json to_json(const MembershipResult& r);
Json to_json(const GroupReport& r);
Json to_json(const StrictStabilizer& s);
Json to_json(const InvarianceSystem& s);
Json to_json(const PadResult& r);
Json to_json(const Tolerances& t);
/// 1-based index list.
Json permutation_to_json(const Permutation& p);

Complex complex_from_json(const Json& j);
Polynomial polynomial_from_json(const Json& j);
/// Accepts a map document or any object carrying one under "map".
RationalMap map_from_json(const Json& j);
HermitianForm form_from_json(const Json& j);
/// Rows of entries; an entry is a number, [re, im] or {"re", "im"}.
Matrix matrix_from_json(const Json& j);
Vector vector_from_json(const Json& j);
/// 1-based index list.
Permutation permutation_from_json(const Json& j, std::size_t n);
/// {"u": matrix, "a": vector} or {"permutation": [...]} or {"angles": [...]},
/// optionally combined with "a".
BallAutomorphism automorphism_from_json(const Json& j, std::size_t n);

Json read_json_file(const std::string& path);

}  // namespace ballmaps
