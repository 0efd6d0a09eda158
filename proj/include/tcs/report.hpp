#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tcs {

/// One named exact check with an optional witness for failures.
struct CheckItem {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct CheckReport {
    std::vector<CheckItem> items;

    void add(std::string name, bool pass, std::string witness = "") {
        items.push_back({std::move(name), pass, std::move(witness)});
    }

    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }

    std::string first_failure() const {
        for (const auto& it : items)
            if (!it.pass) return it.name + (it.witness.empty() ? "" : ": " + it.witness);
        return "";
    }
};

} // namespace tcs
