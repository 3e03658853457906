#include "lca/rounding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace lca {

std::string format_fixed(double value, int decimals) {
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value < 0 ? "-inf" : "inf";

    char buffer[512];
    const auto [end, error] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::fixed);
    if (error != std::errc())
        throw std::runtime_error("cannot render floating-point value");
    std::string text(buffer, end);

    const bool negative = !text.empty() && text.front() == '-';
    if (negative)
        text.erase(0, 1);
    const auto point = text.find('.');
    std::string integer = point == std::string::npos ? text : text.substr(0, point);
    std::string fraction = point == std::string::npos ? std::string() : text.substr(point + 1);

    const auto keep = static_cast<std::size_t>(std::max(decimals, 0));
    bool round_up = fraction.size() > keep && fraction[keep] >= '5';
    fraction.resize(keep, '0');
    if (round_up) {
        std::string digits = integer + fraction;
        std::size_t position = digits.size();
        while (round_up && position > 0) {
            --position;
            if (digits[position] == '9') {
                digits[position] = '0';
            } else {
                ++digits[position];
                round_up = false;
            }
        }
        if (round_up)
            digits.insert(digits.begin(), '1');
        integer = digits.substr(0, digits.size() - keep);
        fraction = digits.substr(digits.size() - keep);
    }

    std::string result;
    const bool all_zero = integer.find_first_not_of('0') == std::string::npos
                          && fraction.find_first_not_of('0') == std::string::npos;
    if (negative && !all_zero)
        result.push_back('-');
    result += integer;
    if (keep > 0)
        result += "." + fraction;
    return result;
}

std::string format_percent(std::uint64_t numerator, std::uint64_t denominator, int decimals) {
    if (denominator == 0)
        throw std::invalid_argument("percentage of an empty total");
    unsigned __int128 scale = 1;
    for (int i = 0; i < decimals + 2; ++i)
        scale *= 10;
    const unsigned __int128 twice = 2 * static_cast<unsigned __int128>(numerator) * scale + denominator;
    const unsigned __int128 quotient = twice / (2 * static_cast<unsigned __int128>(denominator));

    unsigned __int128 unit = 1;
    for (int i = 0; i < decimals; ++i)
        unit *= 10;
    const auto to_text = [](unsigned __int128 value) {
        std::string digits;
        do {
            digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(value % 10)));
            value /= 10;
        } while (value != 0);
        return digits;
    };
    std::string result = to_text(quotient / unit);
    if (decimals > 0) {
        std::string fraction = to_text(quotient % unit);
        fraction.insert(fraction.begin(), static_cast<std::size_t>(decimals) - fraction.size(), '0');
        result += "." + fraction;
    }
    return result;
}

} // namespace lca
