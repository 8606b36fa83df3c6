#pragma once

#include "cnlwiki/wiki/wiki.hpp"

namespace httplib {
class Server;
}

namespace cnlwiki::service {

/// Registers the JSON API on `server`. The wiki must outlive the server.
///
/// Language is always a request parameter; the server keeps no session
/// state. Error statuses: 400 unparsable or malformed input or unknown
/// language, 404 unknown article or entry, 409 inconsistent knowledge base, 422
/// rejected grammar edit, 503 reasoner budget exhausted.
void mountRoutes(httplib::Server& server, wiki::Wiki& wiki);

}  // namespace cnlwiki::service
