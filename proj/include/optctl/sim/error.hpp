#pragma once

#include <stdexcept>
#include <string>

namespace optctl {

// Error raised by device operations and tool dispatch. `code` is part of the
// wire contract: stable strings like "ParamOutOfRange" or "OverlappingConnection".
class ToolError : public std::runtime_error {
public:
    ToolError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

namespace errc {
inline constexpr const char* nonexistent_tool = "NonexistentTool";
inline constexpr const char* missing_param = "MissingParam";
inline constexpr const char* param_out_of_range = "ParamOutOfRange";
inline constexpr const char* device_invariant = "DeviceInvariantViolation";
inline constexpr const char* overlapping_connection = "OverlappingConnection";
inline constexpr const char* invalid_port = "InvalidPort";
inline constexpr const char* edfa_disabled = "EdfaDisabled";
inline constexpr const char* gain_out_of_range = "GainOutOfRange";
inline constexpr const char* output_disabled = "OutputDisabled";
inline constexpr const char* code_out_of_range = "CodeOutOfRange";
inline constexpr const char* invalid_shape = "InvalidShape";
inline constexpr const char* unrouted_channel = "UnroutedChannel";
inline constexpr const char* unknown_device = "UnknownDevice";
inline constexpr const char* config_invalid = "ConfigInvalid";
inline constexpr const char* timeout = "Timeout";
inline constexpr const char* transport_closed = "TransportClosed";
inline constexpr const char* protocol_violation = "ProtocolViolation";
inline constexpr const char* endpoint_unreachable = "EndpointUnreachable";
inline constexpr const char* malformed_model_reply = "MalformedModelReply";
inline constexpr const char* round_limit_exceeded = "RoundLimitExceeded";
inline constexpr const char* unexpected_tool_error = "UnexpectedToolError";
inline constexpr const char* not_converged = "NotConverged";
inline constexpr const char* constraint_violated = "ConstraintViolated";
inline constexpr const char* sweep_range_invalid = "SweepRangeInvalid";
inline constexpr const char* manifest_invalid = "ManifestInvalid";
inline constexpr const char* missing_verdict = "MissingVerdict";
}  // namespace errc

namespace sim {
using optctl::ToolError;
namespace errc = optctl::errc;
}  // namespace sim

}  // namespace optctl
