#include "qkdn/transcript.hpp"

namespace qkdn {

const char* role_name(EntryRole role) {
    switch (role) {
    case EntryRole::HeldKey: return "held_key";
    case EntryRole::Received: return "received";
    case EntryRole::Sent: return "sent";
    case EntryRole::Computed: return "computed";
    }
    return "?";
}

} // namespace qkdn
