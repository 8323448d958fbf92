#include "facadex/triplify/base64.hpp"
#include "facadex/triplify/triplifiers.hpp"

namespace facadex::triplify {

facade::FacadeTree triplify_binary(std::string_view bytes, const TriplifierOptions& /*opts*/,
                                   Warnings* /*warnings*/) {
  facade::FacadeTree tree;
  tree.root->add_value(facade::FacadeKey::number(1),
                       facade::FacadeValue{base64_encode(bytes), facade::ValueType::Base64Binary});
  return tree;
}

}  // namespace facadex::triplify
