#include "gale/report.hpp"

#include <algorithm>
#include <sstream>

namespace gale {

bool Report::all_pass() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

Json Report::to_json() const {
    Json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["results"] = Json::array();
    for (const auto& r : results) j["results"].push_back({{"name", r.name}, {"value", r.value}, {"tolerance", r.tolerance}});
    j["assertions"] = Json::array();
    for (const auto& a : assertions)
        j["assertions"].push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    j["pass"] = all_pass();
    return j;
}

Report Report::from_json(const Json& j) {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    for (const auto& e : j.at("results"))
        r.results.push_back({e.at("name").get<std::string>(), e.at("value"), e.at("tolerance").get<double>()});
    for (const auto& a : j.at("assertions"))
        r.assertions.push_back({a.at("name").get<std::string>(), a.at("pass").get<bool>(), a.at("detail").get<std::string>()});
    return r;
}

namespace {

std::string show(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return to_string(v.get<double>());
    if (v.is_array()) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + show(v[i]);
        return s + ")";
    }
    return v.dump();
}

} // namespace

std::string Report::to_text() const {
    std::ostringstream out;
    out << command << '\n';
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
        out << "  " << r.name << std::string(width - r.name.size() + 2, ' ') << show(r.value);
        if (r.tolerance > 0) out << "  (tol " << to_string(r.tolerance) << ")";
        out << '\n';
    }
    for (const auto& a : assertions) {
        out << (a.pass ? "  PASS  " : "  FAIL  ") << a.name;
        if (!a.detail.empty()) out << "  " << a.detail;
        out << '\n';
    }
    return out.str();
}

Json encode(const Rational& q) { return to_string(q); }
Json encode(double v) { return v; }

Json encode(const Vec3q& v) { return Json::array({encode(v(0)), encode(v(1)), encode(v(2))}); }
Json encode(const Vec3d& v) { return Json::array({v(0), v(1), v(2)}); }

Json encode(const Mat3q& m) {
    Json j = Json::array();
    for (int i = 0; i < 3; ++i) j.push_back(encode(Vec3q(m.row(i).transpose())));
    return j;
}

Json encode(const Mat3d& m) {
    Json j = Json::array();
    for (int i = 0; i < 3; ++i) j.push_back(encode(Vec3d(m.row(i).transpose())));
    return j;
}

Json encode(const Mat2d& m) { return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})}); }

} // namespace gale
