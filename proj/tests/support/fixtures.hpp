#pragma once

// Plain-text case tables: "x0, x1, ... | expected | tolerance" per line,
// '#' starts a comment, blank lines are skipped.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

struct FixtureCase {
    std::vector<double> nodes;
    double expected;
    double tolerance;
    int line;
};

inline std::vector<FixtureCase> parse_fixture(std::istream& in) {
    std::vector<FixtureCase> cases;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string text = raw.substr(0, raw.find('#'));
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;

        std::vector<std::string> fields;
        std::stringstream ss(text);
        for (std::string f; std::getline(ss, f, '|');) fields.push_back(f);
        if (fields.size() != 3) throw std::runtime_error("fixture line " + std::to_string(lineno) + ": need 3 fields");

        FixtureCase c{{}, 0.0, 0.0, lineno};
        std::stringstream nodes(fields[0]);
        for (std::string tok; std::getline(nodes, tok, ',');) {
            c.nodes.push_back(std::stod(tok));
        }
        c.expected = std::stod(fields[1]);
        c.tolerance = std::stod(fields[2]);
        if (c.nodes.empty()) throw std::runtime_error("fixture line " + std::to_string(lineno) + ": no nodes");
        cases.push_back(std::move(c));
    }
    return cases;
}

inline std::vector<FixtureCase> load_fixture(const std::string& name) {
    const std::string path = std::string(DIVEXP_FIXTURE_DIR) + "/" + name;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture " + path);
    return parse_fixture(in);
}

}  // namespace testsupport
