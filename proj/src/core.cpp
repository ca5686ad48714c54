// Copyright 2026 The qrepeat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>

#include "qrepeat/core.hpp"
#include "qrepeat/errors.hpp"

namespace qrepeat {

Settings &settings() {
    static Settings instance;
    return instance;
}

std::string EntryWitness::str() const {
    std::ostringstream out;
    out << "entry (" << row << ", " << col << "): expected " << expected << ", got " << actual;
    return out.str();
}

}  // namespace qrepeat
