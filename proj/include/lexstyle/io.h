// Copyright 2026 The lexstyle Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXSTYLE_IO_H_
#define LEXSTYLE_IO_H_

#include <filesystem>
#include <functional>
#include <iosfwd>

namespace lexstyle {

// Runs `write` against "<path>.tmp", then renames it over `path`. The temp
// file is removed if `write` throws.
void WriteFileAtomically(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& write);

}  // namespace lexstyle

#endif  // LEXSTYLE_IO_H_
