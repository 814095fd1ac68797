#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "qtm/common.hpp"

namespace qtm::testing {

/// Collects warnings for the lifetime of the object.
struct CapturedWarnings {
    std::vector<std::string> messages;
    WarningSink previous;

    CapturedWarnings() : previous(set_warning_sink([this](std::string_view m) { messages.emplace_back(m); })) {}
    ~CapturedWarnings() { set_warning_sink(previous); }
    CapturedWarnings(const CapturedWarnings&) = delete;
    CapturedWarnings& operator=(const CapturedWarnings&) = delete;

    bool any_containing(std::string_view needle) const {
        for (const auto& m : messages) {
            if (m.find(needle) != std::string::npos) return true;
        }
        return false;
    }
};

inline std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("qtm_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace qtm::testing
