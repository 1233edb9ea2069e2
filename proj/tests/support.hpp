#pragma once

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "rectiplan/error.hpp"

namespace testsupport {

// Runs f and reports which failure category it threw, or nullopt if none.
template <typename F>
std::optional<rectiplan::Errc> thrown_code(F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const rectiplan::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("rectiplan_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testsupport

#define CHECK_FAILS(code_expr, body)                                        \
    do {                                                                    \
        auto got = testsupport::thrown_code([&] { body; });                 \
        REQUIRE(got.has_value());                                           \
        CHECK(static_cast<int>(*got) == static_cast<int>(code_expr));       \
    } while (0)
