#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmcast {

/// Index of an event type inside its Alphabet.
using Symbol = std::uint32_t;

/// Ordered, duplicate-free set of event type names. The order is fixed at
/// construction and defines column order in every table downstream.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);

    /// Lexicographically sorted alphabet of the distinct names given.
    static Alphabet infer(std::span<const std::string> names);
    /// Parses a comma separated list such as "a,b,c".
    static Alphabet parse(std::string_view csv);

    std::size_t size() const noexcept { return names_.size(); }
    bool empty() const noexcept { return names_.empty(); }
    const std::string& name(Symbol s) const { return names_.at(s); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    std::optional<Symbol> find(std::string_view name) const;
    /// Like find() but throws DomainError for unknown names.
    Symbol at(std::string_view name) const;

    std::string join(char sep = ',') const;

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::vector<std::string> names_;
};

bool is_valid_identifier(std::string_view name) noexcept;

struct Event {
    Symbol type = 0;
    std::uint64_t timestamp = 0;
    std::size_t index = 0;

    friend bool operator==(const Event&, const Event&) = default;
};

/// Validated sequence of events: consecutive indices, nondecreasing
/// timestamps, types inside the alphabet.
class EventStream {
public:
    EventStream() = default;
    explicit EventStream(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

    /// Appends an event with the next index. Throws DomainError on an
    /// out-of-range symbol or a decreasing timestamp.
    void push(Symbol type, std::uint64_t timestamp);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::span<const Event> events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }
    const Event& operator[](std::size_t i) const { return events_[i]; }

    /// Builds a stream from whitespace separated type names with
    /// timestamps 0,1,2,...
    static EventStream from_words(const Alphabet& alphabet, std::string_view words);

    friend bool operator==(const EventStream&, const EventStream&) = default;

private:
    Alphabet alphabet_;
    std::vector<Event> events_;
};

enum class StreamFormat { Csv, JsonLines };

/// Reads CSV (`timestamp,type`, header optional) or JSON-lines, detected
/// from the first non-blank line. With no alphabet the sorted set of the
/// types encountered is used. Errors name the 1-based physical line.
EventStream read_stream(std::istream& in, const std::optional<Alphabet>& alphabet);
EventStream read_stream(const std::filesystem::path& path,
                        const std::optional<Alphabet>& alphabet);

void write_stream(const EventStream& stream, std::ostream& out,
                  StreamFormat format = StreamFormat::Csv);
void write_stream(const EventStream& stream, const std::filesystem::path& path,
                  StreamFormat format = StreamFormat::Csv);

} // namespace pmcast
