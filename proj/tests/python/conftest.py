import os
import sys

# Run against the in-tree package and the freshly built extension; the CMake
# test sets both directories.
for var in ("COFIX_PACKAGE_DIR", "COFIX_MODULE_DIR"):
    path = os.environ.get(var)
    if path and path not in sys.path:
        sys.path.insert(0, path)
