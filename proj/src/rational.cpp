#include "chordq/rational.hpp"

#include <cctype>

#include "chordq/errors.hpp"

namespace chordq {

namespace {

bool looks_like_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Rat rat_parse(const std::string& text) {
    auto slash = text.find('/');
    std::string num = (slash == std::string::npos) ? text : text.substr(0, slash);
    std::string den = (slash == std::string::npos) ? "1" : text.substr(slash + 1);
    if (!looks_like_integer(num) || !looks_like_integer(den))
        throw InvalidArgument("bad rational literal: '" + text + "'");
    mpz_class n(num), d(den);
    if (d == 0) throw InvalidArgument("zero denominator in rational literal: '" + text + "'");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

std::string rat_str(const Rat& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

}  // namespace chordq
