#pragma once

#include <string_view>

#include "facadex/facade/model.hpp"
#include "facadex/triplify/options.hpp"

namespace facadex::triplify {

// RFC 4180 CSV with ',' delimiter. The root holds one number-keyed row
// container per record; cells become string-keyed slots (header names) when
// csv_headers is set, number-keyed (column index) slots otherwise. Empty
// cells and blank lines produce nothing.
facade::FacadeTree triplify_csv(std::string_view bytes, const TriplifierOptions& opts,
                                Warnings* warnings = nullptr);

// Objects map to string-keyed containers, arrays to number-keyed ones; null
// members are omitted. Duplicate object keys: the last value wins.
facade::FacadeTree triplify_json(std::string_view bytes, const TriplifierOptions& opts,
                                 Warnings* warnings = nullptr);

// Each element becomes a container typed with its qualified name. Attributes
// are string-keyed values; child elements and non-blank text are
// number-keyed slots in document order.
facade::FacadeTree triplify_xml(std::string_view bytes, const TriplifierOptions& opts,
                                Warnings* warnings = nullptr);

// Splits on opts.text_tokenizer_pattern (ECMAScript regex), dropping empty
// pieces.
facade::FacadeTree triplify_text(std::string_view bytes, const TriplifierOptions& opts,
                                 Warnings* warnings = nullptr);

// A single slot 1 holding the base64 of the whole byte stream.
facade::FacadeTree triplify_binary(std::string_view bytes, const TriplifierOptions& opts,
                                   Warnings* warnings = nullptr);

// EXIF tags (JPEG) plus ImageWidth/ImageLength/MediaType read from the image
// stream itself (JPEG or PNG). Throws MetadataError for anything else.
facade::FacadeTree extract_image_metadata(std::string_view bytes);

}  // namespace facadex::triplify
