/** \file  xml.hpp
 *  \brief Minimal non-validating XML reader producing a flat element tree.
 *
 *  Supports elements, attributes, character data, CDATA, comments, processing instructions, a
 *  skipped DOCTYPE, the predefined entities and numeric character references, and namespace
 *  resolution. Parsing is iterative so input nesting depth never touches the call stack.
 */
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lca::xml {

struct Attribute {
    std::string name;
    std::string value;
};

struct Element {
    std::string name; // qualified, as written
    std::string namespace_uri;
    std::vector<Attribute> attributes;
    std::string text; // concatenated direct character data
    std::size_t parent = npos;
    std::vector<std::size_t> children;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::string_view local_name() const;
    std::string_view prefix() const;
    const std::string *attribute(std::string_view name) const;
};

class Document {
public:
    /// Throws lca::ParseError on malformed input.
    static Document parse(std::string_view input);

    const Element &root() const { return elements_.front(); }
    const Element &at(std::size_t index) const { return elements_.at(index); }
    std::size_t size() const { return elements_.size(); }
    /// Elements in document order; index 0 is the root.
    const std::vector<Element> &elements() const { return elements_; }

    /// Index of `element` within elements().
    std::size_t index_of(const Element &element) const {
        return static_cast<std::size_t>(&element - elements_.data());
    }

private:
    std::vector<Element> elements_;
};

} // namespace lca::xml
