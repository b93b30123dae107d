#include "report.hpp"

#include <filesystem>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "cproots/matrix_io.hpp"

namespace cli {

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

ReportBuilder::ReportBuilder(std::string command, std::optional<std::uint64_t> seed) {
    body_["command"] = std::move(command);
    body_["tool_version"] = kToolVersion;
    body_["seed"] = seed ? json(*seed) : json(nullptr);
    body_["inputs"] = {{"files", json::object()}, {"params", json::object()}};
}

void ReportBuilder::file(const std::string& role, const std::string& path) {
    body_["inputs"]["files"][role] = {{"path", path}, {"sha256", sha256_hex(cproots::read_text_file(path))}};
}

void ReportBuilder::param(const std::string& name, const json& value) {
    body_["inputs"]["params"][name] = value;
}

Outcome ReportBuilder::finish(const std::string& verdict, int exit_code) {
    body_["verdict"] = verdict;
    return {body_, exit_code};
}

cproots::CMap load_map(const std::string& path) {
    const json j = cproots::read_json_file(path);
    if (j.is_object() && j.contains("kraus")) {
        std::vector<cproots::CMatrix> kraus;
        for (const json& k : j["kraus"]) kraus.push_back(cproots::matrix_from_json(k));
        if (kraus.empty()) throw cproots::Error(cproots::ErrorCode::InvalidInput, path + ": empty Kraus list");
        return cproots::CMap::from_kraus(kraus);
    }
    return cproots::CMap::from_superop(cproots::matrix_from_json(j));
}

json certificate_json(const cproots::RootCertificate& cert) {
    return {{"n", cert.n},
            {"residual_power", cert.residual_power},
            {"properness_margins", cert.properness_margins},
            {"min_margin", cert.min_margin()},
            {"choi_min_eig", cert.choi_min_eig},
            {"unitality_residual", cert.unitality_residual},
            {"accepted", cert.accepted},
            {"reason", cert.reason}};
}

std::vector<double> parse_times(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const double t = cproots::parse_rational(token);
        if (t < 0.0) throw cproots::Error(cproots::ErrorCode::InvalidInput, "times must be nonnegative");
        out.push_back(t);
    }
    if (out.empty()) throw cproots::Error(cproots::ErrorCode::InvalidInput, "empty time list");
    return out;
}

void emit_artifact(json& report, const std::string& out_dir, const std::string& name, const json& content) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    cproots::write_json_file(path, content);
    report["artifacts"].push_back(path);
}

}  // namespace cli
