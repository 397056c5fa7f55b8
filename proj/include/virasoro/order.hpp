#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace virasoro {

/* Total order on generator indices used for normal ordering. Generators in
 * `promoted` rank above every unpromoted one, in list position order, so the
 * last promoted entry lands rightmost in a normal word. Everything else is
 * compared by index under `base`. */
struct OrderSpec {
    enum class Base { ascending, descending };

    Base base = Base::ascending;
    std::vector<std::int64_t> promoted;
    std::string name = "asc";

    static OrderSpec asc() { return {}; }
    static OrderSpec desc() { return {Base::descending, {}, "desc"}; }
    // ascending on others, e_0 next to the top, e_g maximal (rightmost)
    static OrderSpec ann(std::int64_t g) {
        if (g == 0) throw std::invalid_argument("order ann:0 is not a valid annihilation order");
        return {Base::ascending, {0, g}, "ann:" + std::to_string(g)};
    }
    // same comparator as asc; named separately because module code and
    // serialized elements carry the intent (highest-weight evaluation)
    static OrderSpec hw() { return {Base::ascending, {}, "hw"}; }

    // true when a is ranked strictly below b (a stands left of b when normal)
    bool less(std::int64_t a, std::int64_t b) const {
        if (a == b) return false;
        auto pos = [&](std::int64_t x) -> std::optional<std::size_t> {
            for (std::size_t k = 0; k < promoted.size(); ++k)
                if (promoted[k] == x) return k;
            return std::nullopt;
        };
        auto pa = pos(a), pb = pos(b);
        if (pa && pb) return *pa < *pb;
        if (pb) return true;   // only b promoted
        if (pa) return false;  // only a promoted
        return base == Base::ascending ? a < b : b < a;
    }

    std::int64_t annihilated() const {
        // the maximal promoted generator of an ann order
        if (promoted.size() != 2 || promoted[0] != 0)
            throw std::logic_error("order '" + name + "' does not name an annihilated generator");
        return promoted[1];
    }

    friend bool operator==(const OrderSpec&, const OrderSpec&) = default;

    // names: "asc" | "desc" | "ann:<g>" | "hw"
    static std::optional<OrderSpec> from_name(std::string_view n) {
        if (n == "asc") return asc();
        if (n == "desc") return desc();
        if (n == "hw") return hw();
        if (n.rfind("ann:", 0) == 0) {
            std::string num(n.substr(4));
            if (num.empty()) return std::nullopt;
            std::size_t pos = 0;
            try {
                long long g = std::stoll(num, &pos);
                if (pos != num.size() || g == 0) return std::nullopt;
                return ann(g);
            } catch (const std::exception&) {
                return std::nullopt;
            }
        }
        return std::nullopt;
    }
};

}  // namespace virasoro
