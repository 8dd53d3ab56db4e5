#pragma once

// Shared plumbing for the test binaries: fixture loading and a relative
// comparison that reads well in doctest failure output.

#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

namespace testsupport {

inline nlohmann::json load_fixture(const std::string& name) {
    const char* dir = std::getenv("IRSFSO_TEST_DATA");
    if (!dir)
        throw std::runtime_error("IRSFSO_TEST_DATA is not set (run via ctest)");
    const std::string path = std::string(dir) + "/" + name + ".json";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing fixture " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

inline double rel_err(double actual, double expected) {
    const double scale = std::abs(expected) > 1e-300 ? std::abs(expected) : 1.0;
    return std::abs(actual - expected) / scale;
}

}  // namespace testsupport
