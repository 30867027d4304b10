#pragma once

// JSON documents: channel and dilation inputs, report payloads.
// Complex numbers are [re, im]; matrices are arrays of rows.

#include <optional>
#include <string>

#include <json.hpp>

#include "channellab/channel.hpp"
#include "channellab/dilation.hpp"
#include "channellab/errors.hpp"
#include "channellab/lyapunov.hpp"
#include "channellab/spectral.hpp"

namespace channellab {

/// A document does not match its schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

namespace io {

using nlohmann::json;

json to_json(Complex z);
json to_json(const ComplexMatrix& m);
json vector_to_json(const ComplexVector& v);

Complex complex_from_json(const json& j);
ComplexMatrix matrix_from_json(const json& j, int rows, int cols, const std::string& where);
ComplexVector vector_from_json(const json& j, int size, const std::string& where);

struct ChannelDocument {
  KrausChannel channel;
  std::optional<StinespringDilation> stinespring;
};

/// {"dim", "label"?, "kraus"} or {"stinespring": {"dimA", "dimB", "unitary", "bath_state"}}.
ChannelDocument channel_from_json(const json& j);
json channel_to_json(const KrausChannel& c);
json stinespring_to_json(const StinespringDilation& d, const std::string& label = {});

/// {"dimA", "dimB", "unitary", "bath_state", "mA", "mB", "extremal"}.
ConservedDilation dilation_from_json(const json& j);
json dilation_to_json(const ConservedDilation& cd);

json to_json(const ValidationReport& r);
json to_json(const SpectralReport& r);
json to_json(const ConservedValidationReport& r);
json to_json(const FactorizingEigenstateReport& r);
json to_json(const ConsistencyReport& r);
json to_json(const OracleResult& r);

/// One JSON object per orbit step: {"n", <functional>: value..., "distance_to_fixed_point"}.
json orbit_step_to_json(const OrbitTrace& trace, int step);

/// JSON has no infinity; non-finite values serialize as the strings "inf"/"-inf"/"nan".
json real_to_json(double x);

}  // namespace io
}  // namespace channellab
