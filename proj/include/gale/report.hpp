#pragma once

#include "gale/types.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace gale {

using Json = nlohmann::ordered_json;

/// Named result; tolerance 0 marks an exact value.
struct ResultEntry {
    std::string name;
    Json value;
    double tolerance = 0;

    friend bool operator==(const ResultEntry&, const ResultEntry&) = default;
};

struct Assertion {
    std::string name;
    bool pass = false;
    std::string detail;

    friend bool operator==(const Assertion&, const Assertion&) = default;
};

struct Report {
    std::string command;
    Json inputs = Json::object();
    std::vector<ResultEntry> results;
    std::vector<Assertion> assertions;

    void add(std::string name, Json value, double tolerance = 0) {
        results.push_back({std::move(name), std::move(value), tolerance});
    }
    bool check(std::string name, bool pass, std::string detail = {}) {
        assertions.push_back({std::move(name), pass, std::move(detail)});
        return pass;
    }
    bool all_pass() const;

    Json to_json() const;
    static Report from_json(const Json& j);
    std::string to_text() const;

    friend bool operator==(const Report&, const Report&) = default;
};

Json encode(const Rational& q);
Json encode(double v);
Json encode(const Vec3q& v);
Json encode(const Vec3d& v);
Json encode(const Mat3q& m);
Json encode(const Mat3d& m);
Json encode(const Mat2d& m);

} // namespace gale
