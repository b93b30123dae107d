#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cproots/cpmap.hpp"
#include "cproots/discrete_roots.hpp"

namespace cli {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

enum Exit { kAccept = 0, kInputError = 1, kReject = 2, kInconclusive = 3 };

struct Outcome {
    json report;
    int exit_code = kAccept;
};

// Report skeleton; files are hashed (SHA-256 of raw bytes).
class ReportBuilder {
public:
    ReportBuilder(std::string command, std::optional<std::uint64_t> seed = std::nullopt);
    void file(const std::string& role, const std::string& path);
    void param(const std::string& name, const json& value);
    json& body() { return body_; }
    Outcome finish(const std::string& verdict, int exit_code);

private:
    json body_;
};

std::string sha256_hex(const std::string& bytes);

cproots::CMap load_map(const std::string& path);
json certificate_json(const cproots::RootCertificate& cert);
std::vector<double> parse_times(const std::string& list);

// Writes an artifact under out_dir when set and records it in the report.
void emit_artifact(json& report, const std::string& out_dir, const std::string& name, const json& content);

Outcome run_fixtures(const std::string& out_dir);

}  // namespace cli
