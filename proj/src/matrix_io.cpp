#include "cproots/matrix_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cproots {

using nlohmann::json;

json matrix_to_json(const CMatrix& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw Error(ErrorCode::InvalidInput, "matrix needs rows, cols and data");
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        throw Error(ErrorCode::InvalidInput, "rows and cols must be integers");
    const long rows = j["rows"].get<long>();
    const long cols = j["cols"].get<long>();
    if (rows <= 0 || cols <= 0) throw Error(ErrorCode::InvalidInput, "rows and cols must be positive");
    const json& data = j["data"];
    if (!data.is_array() || static_cast<long>(data.size()) != rows * cols)
        throw Error(ErrorCode::InvalidInput, "data length must equal rows*cols");
    CMatrix m(rows, cols);
    for (long k = 0; k < rows * cols; ++k) {
        const json& e = data[k];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw Error(ErrorCode::InvalidInput, "entry " + std::to_string(k) + " must be [re, im]");
        const double re = e[0].get<double>();
        const double im = e[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw Error(ErrorCode::InvalidInput, "entry " + std::to_string(k) + " is not finite");
        m(k / cols, k % cols) = cplx(re, im);
    }
    return m;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, origin + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

json read_json_file(const std::string& path) {
    return parse_json_text(read_text_file(path), path);
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
    out << j.dump(1) << '\n';
}

double parse_rational(const std::string& token) {
    std::string t;
    for (char c : token)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw Error(ErrorCode::InvalidInput, "empty number");
    const auto slash = t.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        }
        const std::string num = t.substr(0, slash);
        const std::string den = t.substr(slash + 1);
        std::size_t un = 0, ud = 0;
        const double a = std::stod(num, &un);
        const double b = std::stod(den, &ud);
        if (un != num.size() || ud != den.size() || b == 0.0) throw std::invalid_argument(t);
        return a / b;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::InvalidInput, "cannot parse number '" + token + "'");
    }
}

std::vector<double> parse_probabilities(const std::string& spec) {
    std::string s = spec;
    const auto first = s.find_first_not_of(" \t");
    if (first != std::string::npos && (s[first] == '(' || s[first] == '[') && s.find(".json") == std::string::npos) {
        const auto last = s.find_last_of(")]");
        if (last == std::string::npos || last <= first) throw Error(ErrorCode::InvalidInput, "unbalanced brackets");
        std::vector<double> out;
        std::stringstream ss(s.substr(first + 1, last - first - 1));
        std::string token;
        while (std::getline(ss, token, ',')) out.push_back(parse_rational(token));
        return out;
    }
    const json j = read_json_file(spec);
    std::vector<double> out;
    if (j.is_array()) {
        for (const json& e : j) out.push_back(e.is_string() ? parse_rational(e.get<std::string>()) : e.get<double>());
        return out;
    }
    const CMatrix m = matrix_from_json(j);
    if (m.rows() != 1 && m.cols() != 1) throw Error(ErrorCode::InvalidInput, "probability matrix must be a vector");
    for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m(i).real());
    return out;
}

}  // namespace cproots
