#include "pblockade/config.hpp"

#include "pblockade/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pblockade {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

const std::vector<std::string>& parameter_keys()
{
    static const std::vector<std::string> keys = {
        "kappa", "kappa1", "kappa2", "g", "delta_p", "delta_he", "delta_e", "delta_c",
        "E_he", "E_eg", "b_in", "phi_p", "phi_he", "phi_eg", "J", "direction",
    };
    return keys;
}

std::string canonical_key(std::string_view key)
{
    for (const auto& k : parameter_keys()) {
        if (k == key) {
            return k;
        }
    }
    if (key == "e_he") return "E_he";
    if (key == "e_eg") return "E_eg";
    if (key == "j") return "J";
    return {};
}

double parse_double(std::string_view text, std::string_view what)
{
    text = trim(text);
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ConfigError(std::string(what) + ": cannot parse '" + std::string(text) + "' as a number");
    }
    return v;
}

std::string format_double(double x)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

std::vector<Setting> parse_config_text(std::string_view text, std::string_view source)
{
    std::vector<Setting> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string origin = std::string(source) + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(origin + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(origin + ": expected 'key = value'");
        }
        out.push_back({std::string(key), std::string(value), origin});
    }
    return out;
}

std::vector<Setting> read_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

SystemParams apply_settings(SystemParams p, const std::vector<Setting>& settings)
{
    bool k1 = false;
    bool k2 = false;
    for (const auto& s : settings) {
        const std::string key = canonical_key(s.key);
        const std::string where = s.origin.empty() ? s.key : s.origin + ": " + s.key;
        if (key.empty()) {
            throw ConfigError(where + ": unknown key");
        }
        if (key == "direction") {
            std::string v = s.value;
            std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
            if (v == "forward") {
                p.direction = Direction::Forward;
            } else if (v == "backward") {
                p.direction = Direction::Backward;
            } else {
                throw ConfigError(where + ": expected forward or backward, got '" + s.value + "'");
            }
            continue;
        }
        const double v = parse_double(s.value, where);
        if (key == "kappa") p.kappa = v;
        else if (key == "kappa1") { p.kappa1 = v; k1 = true; }
        else if (key == "kappa2") { p.kappa2 = v; k2 = true; }
        else if (key == "g") p.g = v;
        else if (key == "delta_p") p.delta_p = v;
        else if (key == "delta_he") p.delta_he = v;
        else if (key == "delta_e") p.delta_e = v;
        else if (key == "delta_c") p.delta_c = v;
        else if (key == "E_he") p.E_he = v;
        else if (key == "E_eg") p.E_eg = v;
        else if (key == "b_in") p.b_in = v;
        else if (key == "phi_p") p.phi_p = v;
        else if (key == "phi_he") p.phi_he = v;
        else if (key == "phi_eg") p.phi_eg = v;
        else if (key == "J") p.J = v;
    }
    if (k1 && !k2) {
        p.kappa2 = 2.0 * p.kappa - p.kappa1;
    } else if (k2 && !k1) {
        p.kappa1 = 2.0 * p.kappa - p.kappa2;
    }
    try {
        validate(p);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return p;
}

std::string to_config_text(const SystemParams& p)
{
    std::ostringstream os;
    auto line = [&](std::string_view k, double v) { os << k << " = " << format_double(v) << '\n'; };
    line("kappa", p.kappa);
    line("kappa1", p.kappa1);
    line("kappa2", p.kappa2);
    line("g", p.g);
    line("delta_p", p.delta_p);
    if (p.delta_he) line("delta_he", *p.delta_he);
    line("delta_e", p.delta_e);
    line("delta_c", p.delta_c);
    line("E_he", p.E_he);
    line("E_eg", p.E_eg);
    line("b_in", p.b_in);
    line("phi_p", p.phi_p);
    line("phi_he", p.phi_he);
    line("phi_eg", p.phi_eg);
    if (p.J) line("J", *p.J);
    os << "direction = " << to_string(p.direction) << '\n';
    return os.str();
}

} // namespace pblockade
