import os
import sys

# The ctest driver points these at the build tree and the source tree.
module_dir = os.environ.get("SCAMTRACE_MODULE_DIR")
if module_dir:
    sys.path.insert(0, module_dir)
src = os.environ.get("SCAMTRACE_SRC")
if src:
    sys.path.insert(0, os.path.join(src, "python"))
