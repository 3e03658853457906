/** \file  json_codec.hpp
 *  \brief JSON encodings of the model entities, shared by the dataset file, the fixture server and
 *         the catalog client.
 */
#pragma once

#include <json.hpp>

#include "lca/model.hpp"

namespace lca::codec {

using OrderedJson = nlohmann::ordered_json;

/// Record object without the entity tag.
OrderedJson encode_record(const BookRecord &record);
OrderedJson encode_library(const LibraryOrg &library);
OrderedJson encode_holding(const Holding &holding);

/// Throw lca::Error subclasses (InvalidValueError) describing the first problem found.
BookRecord decode_record(const nlohmann::json &object);
LibraryOrg decode_library(const nlohmann::json &object);
Holding decode_holding(const nlohmann::json &object);

} // namespace lca::codec
