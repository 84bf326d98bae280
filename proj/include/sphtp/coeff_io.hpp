#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sphtp/sht.hpp"
#include "sphtp/tsh.hpp"

namespace sphtp {

/// Malformed coefficient or sample document. `pointer()` is the JSON pointer
/// of the offending value.
class SchemaError : public std::invalid_argument {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : std::invalid_argument(pointer.empty() ? what : pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// Compact JSON with sorted keys, floats printed with `digits` significant
/// digits, -0 printed as 0 and a trailing LF. Throws std::domain_error on
/// non-finite numbers.
std::string canonical_json(const nlohmann::json& doc, int digits = 17);

nlohmann::json to_json(const IrrepCoeffs& x);
nlohmann::json to_json(const TshCoeffs& x);
IrrepCoeffs irrep_from_json(const nlohmann::json& doc);
TshCoeffs tsh_from_json(const nlohmann::json& doc);

/// The document's "s" field, 0 when absent.
int json_spin(const nlohmann::json& doc);

/// Sample dump: {"L", "s", "grid": {...}, "re", "im"} with values ordered by
/// theta node, phi node, then m_s.
nlohmann::json samples_to_json(const SpinSignal& f, int L);
nlohmann::json samples_to_json(const ScalarSignal& f, int L);
/// Rebuilds the grid from "grid/Lg" and checks the stored nodes against it.
SpinSignal samples_from_json(const nlohmann::json& doc, int* L = nullptr);

SpinSignal to_spin_signal(const ScalarSignal& f);
ScalarSignal to_scalar_signal(const SpinSignal& f);

/// Parse errors become SchemaError; unreadable files std::runtime_error.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sphtp
