#include "pmcast/event_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pmcast/error.hpp"
#include "text_util.hpp"

namespace pmcast {

bool is_valid_identifier(std::string_view name) noexcept {
    if (name.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name.front())) return false;
    return std::all_of(name.begin() + 1, name.end(), [&](char c) { return alpha(c) || digit(c); });
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw DomainError("alphabet must contain at least one event type");
    std::set<std::string_view> seen;
    for (const auto& n : names_) {
        if (!is_valid_identifier(n)) throw DomainError("invalid event type name '" + n + "'");
        if (!seen.insert(n).second) throw DomainError("duplicate event type '" + n + "'");
    }
}

Alphabet Alphabet::infer(std::span<const std::string> names) {
    std::set<std::string> distinct(names.begin(), names.end());
    return Alphabet(std::vector<std::string>(distinct.begin(), distinct.end()));
}

Alphabet Alphabet::parse(std::string_view csv) {
    std::vector<std::string> names;
    for (auto part : detail::split(csv, ',')) names.emplace_back(detail::trim(part));
    return Alphabet(std::move(names));
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<Symbol>(it - names_.begin());
}

Symbol Alphabet::at(std::string_view name) const {
    if (auto s = find(name)) return *s;
    throw DomainError("unknown event type '" + std::string(name) + "'");
}

std::string Alphabet::join(char sep) const {
    std::string out;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (i) out += sep;
        out += names_[i];
    }
    return out;
}

void EventStream::push(Symbol type, std::uint64_t timestamp) {
    if (type >= alphabet_.size())
        throw DomainError("event type id " + std::to_string(type) + " outside alphabet");
    if (!events_.empty() && timestamp < events_.back().timestamp)
        throw DomainError("decreasing timestamp " + std::to_string(timestamp) + " after " +
                          std::to_string(events_.back().timestamp));
    events_.push_back(Event{type, timestamp, events_.size()});
}

EventStream EventStream::from_words(const Alphabet& alphabet, std::string_view words) {
    EventStream stream(alphabet);
    std::istringstream in{std::string(words)};
    std::string w;
    std::uint64_t t = 0;
    while (in >> w) stream.push(alphabet.at(w), t++);
    return stream;
}

namespace {

struct RawEvent {
    std::uint64_t timestamp;
    std::string type;
    std::size_t line;
};

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ParseError(msg + " at line " + std::to_string(line), line);
}

std::uint64_t parse_timestamp(std::string_view text, std::size_t line) {
    text = detail::trim(text);
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
        fail(line, "malformed timestamp '" + std::string(text) + "'");
    return v;
}

RawEvent parse_csv_line(std::string_view line, std::size_t lineno) {
    const auto fields = detail::split(line, ',');
    if (fields.size() != 2) fail(lineno, "expected 'timestamp,type'");
    RawEvent ev{parse_timestamp(fields[0], lineno), std::string(detail::trim(fields[1])), lineno};
    if (!is_valid_identifier(ev.type)) fail(lineno, "invalid event type '" + ev.type + "'");
    return ev;
}

RawEvent parse_json_line(std::string_view line, std::size_t lineno) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
        fail(lineno, "malformed JSON");
    }
    if (!j.is_object()) fail(lineno, "expected a JSON object");
    const auto ts = j.find("timestamp");
    const auto ty = j.find("type");
    if (ts == j.end() || !ts->is_number_unsigned())
        fail(lineno, "missing or non-integer 'timestamp'");
    if (ty == j.end() || !ty->is_string()) fail(lineno, "missing or non-string 'type'");
    RawEvent ev{ts->get<std::uint64_t>(), ty->get<std::string>(), lineno};
    if (!is_valid_identifier(ev.type)) fail(lineno, "invalid event type '" + ev.type + "'");
    return ev;
}

} // namespace

EventStream read_stream(std::istream& in, const std::optional<Alphabet>& alphabet) {
    std::vector<RawEvent> raw;
    std::optional<StreamFormat> format;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto body = detail::trim(line);
        if (body.empty()) fail(lineno, "empty line");
        if (!format) {
            format = body.front() == '{' ? StreamFormat::JsonLines : StreamFormat::Csv;
            if (*format == StreamFormat::Csv && body == "timestamp,type") continue;
        }
        raw.push_back(*format == StreamFormat::Csv ? parse_csv_line(body, lineno)
                                                   : parse_json_line(body, lineno));
    }
    if (in.bad()) throw IoError("failed reading stream");

    Alphabet alpha;
    if (alphabet) {
        alpha = *alphabet;
    } else {
        if (raw.empty()) throw DomainError("cannot infer an alphabet from an empty stream");
        std::vector<std::string> names;
        names.reserve(raw.size());
        for (const auto& r : raw) names.push_back(r.type);
        alpha = Alphabet::infer(names);
    }

    EventStream stream(alpha);
    std::uint64_t last = 0;
    for (const auto& r : raw) {
        const auto sym = alpha.find(r.type);
        if (!sym) fail(r.line, "unknown type " + r.type);
        if (!stream.empty() && r.timestamp < last)
            fail(r.line, "decreasing timestamp " + std::to_string(r.timestamp));
        stream.push(*sym, r.timestamp);
        last = r.timestamp;
    }
    return stream;
}

EventStream read_stream(const std::filesystem::path& path, const std::optional<Alphabet>& alphabet) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    try {
        return read_stream(in, alphabet);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

void write_stream(const EventStream& stream, std::ostream& out, StreamFormat format) {
    const auto& alpha = stream.alphabet();
    if (format == StreamFormat::Csv) {
        out << "timestamp,type\n";
        for (const auto& e : stream.events()) out << e.timestamp << ',' << alpha.name(e.type) << '\n';
    } else {
        for (const auto& e : stream.events()) {
            nlohmann::ordered_json j;
            j["timestamp"] = e.timestamp;
            j["type"] = alpha.name(e.type);
            out << j.dump() << '\n';
        }
    }
}

void write_stream(const EventStream& stream, const std::filesystem::path& path, StreamFormat format) {
    std::ostringstream ss;
    write_stream(stream, ss, format);
    detail::write_file(path, ss.str());
}

} // namespace pmcast
