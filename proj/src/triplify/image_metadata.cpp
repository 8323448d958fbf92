#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>

#include "facadex/error.hpp"
#include "facadex/triplify/triplifiers.hpp"

namespace facadex::triplify {

namespace {

const std::unordered_map<std::uint16_t, std::string_view>& tiff_tag_names() {
  static const std::unordered_map<std::uint16_t, std::string_view> names = {
      {0x0100, "ImageWidth"},
      {0x0101, "ImageLength"},
      {0x0102, "BitsPerSample"},
      {0x0103, "Compression"},
      {0x0106, "PhotometricInterpretation"},
      {0x010E, "ImageDescription"},
      {0x010F, "Make"},
      {0x0110, "Model"},
      {0x0111, "StripOffsets"},
      {0x0112, "Orientation"},
      {0x0115, "SamplesPerPixel"},
      {0x0116, "RowsPerStrip"},
      {0x0117, "StripByteCounts"},
      {0x011A, "XResolution"},
      {0x011B, "YResolution"},
      {0x011C, "PlanarConfiguration"},
      {0x0128, "ResolutionUnit"},
      {0x012D, "TransferFunction"},
      {0x0131, "Software"},
      {0x0132, "DateTime"},
      {0x013B, "Artist"},
      {0x013E, "WhitePoint"},
      {0x013F, "PrimaryChromaticities"},
      {0x0201, "JPEGInterchangeFormat"},
      {0x0202, "JPEGInterchangeFormatLength"},
      {0x0211, "YCbCrCoefficients"},
      {0x0212, "YCbCrSubSampling"},
      {0x0213, "YCbCrPositioning"},
      {0x0214, "ReferenceBlackWhite"},
      {0x8298, "Copyright"},
      {0x829A, "ExposureTime"},
      {0x829D, "FNumber"},
      {0x8822, "ExposureProgram"},
      {0x8824, "SpectralSensitivity"},
      {0x8827, "PhotographicSensitivity"},
      {0x8828, "OECF"},
      {0x8830, "SensitivityType"},
      {0x9000, "ExifVersion"},
      {0x9003, "DateTimeOriginal"},
      {0x9004, "DateTimeDigitized"},
      {0x9101, "ComponentsConfiguration"},
      {0x9102, "CompressedBitsPerPixel"},
      {0x9201, "ShutterSpeedValue"},
      {0x9202, "ApertureValue"},
      {0x9203, "BrightnessValue"},
      {0x9204, "ExposureBiasValue"},
      {0x9205, "MaxApertureValue"},
      {0x9206, "SubjectDistance"},
      {0x9207, "MeteringMode"},
      {0x9208, "LightSource"},
      {0x9209, "Flash"},
      {0x920A, "FocalLength"},
      {0x9214, "SubjectArea"},
      {0x927C, "MakerNote"},
      {0x9286, "UserComment"},
      {0x9290, "SubSecTime"},
      {0x9291, "SubSecTimeOriginal"},
      {0x9292, "SubSecTimeDigitized"},
      {0xA000, "FlashpixVersion"},
      {0xA001, "ColorSpace"},
      {0xA002, "PixelXDimension"},
      {0xA003, "PixelYDimension"},
      {0xA004, "RelatedSoundFile"},
      {0xA20B, "FlashEnergy"},
      {0xA20E, "FocalPlaneXResolution"},
      {0xA20F, "FocalPlaneYResolution"},
      {0xA210, "FocalPlaneResolutionUnit"},
      {0xA214, "SubjectLocation"},
      {0xA215, "ExposureIndex"},
      {0xA217, "SensingMethod"},
      {0xA300, "FileSource"},
      {0xA301, "SceneType"},
      {0xA302, "CFAPattern"},
      {0xA401, "CustomRendered"},
      {0xA402, "ExposureMode"},
      {0xA403, "WhiteBalance"},
      {0xA404, "DigitalZoomRatio"},
      {0xA405, "FocalLengthIn35mmFilm"},
      {0xA406, "SceneCaptureType"},
      {0xA407, "GainControl"},
      {0xA408, "Contrast"},
      {0xA409, "Saturation"},
      {0xA40A, "Sharpness"},
      {0xA40B, "DeviceSettingDescription"},
      {0xA40C, "SubjectDistanceRange"},
      {0xA420, "ImageUniqueID"},
      {0xA430, "CameraOwnerName"},
      {0xA431, "BodySerialNumber"},
      {0xA432, "LensSpecification"},
      {0xA433, "LensMake"},
      {0xA434, "LensModel"},
      {0xA435, "LensSerialNumber"},
      {0xA500, "Gamma"},
  };
  return names;
}

constexpr std::string_view kGpsNames[] = {
    "GPSVersionID",       "GPSLatitudeRef",      "GPSLatitude",         "GPSLongitudeRef",
    "GPSLongitude",       "GPSAltitudeRef",      "GPSAltitude",         "GPSTimeStamp",
    "GPSSatellites",      "GPSStatus",           "GPSMeasureMode",      "GPSDOP",
    "GPSSpeedRef",        "GPSSpeed",            "GPSTrackRef",         "GPSTrack",
    "GPSImgDirectionRef", "GPSImgDirection",     "GPSMapDatum",         "GPSDestLatitudeRef",
    "GPSDestLatitude",    "GPSDestLongitudeRef", "GPSDestLongitude",    "GPSDestBearingRef",
    "GPSDestBearing",     "GPSDestDistanceRef",  "GPSDestDistance",     "GPSProcessingMethod",
    "GPSAreaInformation", "GPSDateStamp",        "GPSDifferential",     "GPSHPositioningError",
};

constexpr std::uint16_t kExifIfdPointer = 0x8769;
constexpr std::uint16_t kGpsIfdPointer = 0x8825;
constexpr std::uint16_t kInteropIfdPointer = 0xA005;

enum class IfdKind { Main, Exif, Gps };

std::string tag_name(std::uint16_t tag, IfdKind kind) {
  if (kind == IfdKind::Gps) {
    if (tag < std::size(kGpsNames)) return std::string(kGpsNames[tag]);
  } else {
    auto it = tiff_tag_names().find(tag);
    if (it != tiff_tag_names().end()) return std::string(it->second);
  }
  static const char kHex[] = "0123456789ABCDEF";
  std::string s = "Tag0x";
  for (int shift = 12; shift >= 0; shift -= 4) s += kHex[(tag >> shift) & 0xF];
  return s;
}

// Ordered key/value collection; the first writer of a key wins.
class TagSink {
 public:
  void put(std::string key, std::string value) {
    if (seen_.insert(key).second) entries_.emplace_back(std::move(key), std::move(value));
  }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::set<std::string> seen_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

class TiffReader {
 public:
  explicit TiffReader(std::string_view data) : d_(data) {}

  void read(TagSink& sink) {
    if (d_.size() < 8) return;
    if (d_.substr(0, 2) == "II") {
      little_ = true;
    } else if (d_.substr(0, 2) == "MM") {
      little_ = false;
    } else {
      return;
    }
    if (u16(2) != 42) return;
    read_ifd(u32(4), IfdKind::Main, sink);
  }

 private:
  std::uint16_t u16(std::size_t at) const {
    auto b0 = static_cast<std::uint8_t>(d_[at]);
    auto b1 = static_cast<std::uint8_t>(d_[at + 1]);
    return little_ ? static_cast<std::uint16_t>(b0 | (b1 << 8))
                   : static_cast<std::uint16_t>((b0 << 8) | b1);
  }
  std::uint32_t u32(std::size_t at) const {
    std::uint32_t a = u16(at);
    std::uint32_t b = u16(at + 2);
    return little_ ? (a | (b << 16)) : ((a << 16) | b);
  }

  static std::size_t type_size(std::uint16_t type) {
    switch (type) {
      case 1: case 2: case 6: case 7: return 1;
      case 3: case 8: return 2;
      case 4: case 9: case 11: return 4;
      case 5: case 10: case 12: return 8;
      default: return 0;
    }
  }

  std::string render(std::uint16_t type, std::size_t count, std::size_t at) const {
    std::string out;
    auto sep = [&] {
      if (!out.empty()) out += ' ';
    };
    switch (type) {
      case 2: {  // ASCII, NUL terminated
        std::string_view s = d_.substr(at, count);
        std::size_t nul = s.find('\0');
        if (nul != std::string_view::npos) s = s.substr(0, nul);
        return std::string(s);
      }
      case 7: {  // UNDEFINED: text when printable, bytes otherwise
        std::string_view s = d_.substr(at, count);
        bool printable = !s.empty();
        for (char c : s) printable = printable && c >= 0x20 && c < 0x7F;
        if (printable) return std::string(s);
        for (char c : s) {
          sep();
          out += std::to_string(static_cast<std::uint8_t>(c));
        }
        return out;
      }
      default:
        break;
    }
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t p = at + i * type_size(type);
      sep();
      switch (type) {
        case 1: out += std::to_string(static_cast<std::uint8_t>(d_[p])); break;
        case 6: out += std::to_string(static_cast<std::int8_t>(d_[p])); break;
        case 3: out += std::to_string(u16(p)); break;
        case 8: out += std::to_string(static_cast<std::int16_t>(u16(p))); break;
        case 4: out += std::to_string(u32(p)); break;
        case 9: out += std::to_string(static_cast<std::int32_t>(u32(p))); break;
        case 5: out += std::to_string(u32(p)) + "/" + std::to_string(u32(p + 4)); break;
        case 10:
          out += std::to_string(static_cast<std::int32_t>(u32(p))) + "/" +
                 std::to_string(static_cast<std::int32_t>(u32(p + 4)));
          break;
        default: out += "?"; break;
      }
    }
    return out;
  }

  void read_ifd(std::uint32_t offset, IfdKind kind, TagSink& sink) {
    if (!visited_.insert(offset).second) return;
    if (offset + 2ULL > d_.size()) return;
    std::uint16_t n = u16(offset);
    for (std::uint16_t i = 0; i < n; ++i) {
      std::size_t e = offset + 2 + i * 12ULL;
      if (e + 12 > d_.size()) return;
      std::uint16_t tag = u16(e);
      std::uint16_t type = u16(e + 2);
      std::uint32_t count = u32(e + 4);
      if (kind == IfdKind::Main && (tag == kExifIfdPointer || tag == kGpsIfdPointer)) {
        read_ifd(u32(e + 8), tag == kExifIfdPointer ? IfdKind::Exif : IfdKind::Gps, sink);
        continue;
      }
      if (tag == kInteropIfdPointer) continue;
      std::size_t size = type_size(type);
      if (size == 0 || count == 0) continue;
      std::uint64_t bytes = static_cast<std::uint64_t>(size) * count;
      std::size_t at = bytes <= 4 ? e + 8 : u32(e + 8);
      if (at + bytes > d_.size()) continue;
      sink.put(tag_name(tag, kind), render(type, count, at));
    }
    // IFD1 (thumbnail) is deliberately not followed.
  }

  std::string_view d_;
  bool little_ = true;
  std::set<std::uint32_t> visited_;
};

struct Dimensions {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

std::uint32_t be16(std::string_view d, std::size_t at) {
  return (static_cast<std::uint8_t>(d[at]) << 8) | static_cast<std::uint8_t>(d[at + 1]);
}

std::uint32_t be32(std::string_view d, std::size_t at) { return (be16(d, at) << 16) | be16(d, at + 2); }

bool is_sof(std::uint8_t marker) {
  return marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 && marker != 0xCC;
}

// Walks JPEG segments up to the first scan, collecting the frame size and
// any EXIF block.
Dimensions scan_jpeg(std::string_view d, TagSink& exif) {
  std::optional<Dimensions> dims;
  std::size_t i = 2;
  while (i + 4 <= d.size()) {
    if (static_cast<std::uint8_t>(d[i]) != 0xFF) throw MetadataError("image: corrupt JPEG marker");
    auto marker = static_cast<std::uint8_t>(d[i + 1]);
    if (marker == 0xFF) {
      ++i;
      continue;
    }
    if (marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) {
      i += 2;
      continue;
    }
    if (marker == 0xD9 || marker == 0xDA) break;
    std::size_t len = be16(d, i + 2);
    if (len < 2 || i + 2 + len > d.size()) throw MetadataError("image: truncated JPEG segment");
    std::string_view body = d.substr(i + 4, len - 2);
    if (is_sof(marker) && body.size() >= 5) {
      dims = Dimensions{be16(body, 3), be16(body, 1)};
    } else if (marker == 0xE1 && body.substr(0, 6) == std::string_view("Exif\0\0", 6)) {
      TiffReader(body.substr(6)).read(exif);
    }
    i += 2 + len;
  }
  if (!dims) throw MetadataError("image: JPEG has no frame header");
  return *dims;
}

}  // namespace

facade::FacadeTree extract_image_metadata(std::string_view bytes) {
  static constexpr std::string_view kPng("\x89PNG\r\n\x1a\n", 8);
  TagSink basic;
  TagSink exif;
  if (bytes.size() >= 4 && static_cast<std::uint8_t>(bytes[0]) == 0xFF &&
      static_cast<std::uint8_t>(bytes[1]) == 0xD8) {
    Dimensions dims = scan_jpeg(bytes, exif);
    basic.put("ImageWidth", std::to_string(dims.width));
    basic.put("ImageLength", std::to_string(dims.height));
    basic.put("MediaType", "image/jpeg");
  } else if (bytes.size() >= 24 && bytes.substr(0, 8) == kPng && bytes.substr(12, 4) == "IHDR") {
    basic.put("ImageWidth", std::to_string(be32(bytes, 16)));
    basic.put("ImageLength", std::to_string(be32(bytes, 20)));
    basic.put("MediaType", "image/png");
  } else {
    throw MetadataError("image: not a JPEG or PNG stream");
  }

  for (const auto& [key, value] : exif.entries()) basic.put(key, value);
  facade::FacadeTree tree;
  for (const auto& [key, value] : basic.entries()) {
    if (!value.empty()) tree.root->add_value(facade::FacadeKey::string(key), facade::FacadeValue{value});
  }
  return tree;
}

}  // namespace facadex::triplify
