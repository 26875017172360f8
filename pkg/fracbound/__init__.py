import os
import fnmatch
from appdirs import user_cache_dir

OUTPUT_FOLDER_PATH = user_cache_dir("fracbound")

# worker count handed to scipy.fft; set by the --threads flag
FFT_WORKERS = None

def set_threads(threads):
    global FFT_WORKERS
    if threads is not None and threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    FFT_WORKERS = threads

def resolve_output_dir(flag=None, configured=None):
    """--output-dir, then $FRACBOUND_OUTPUT_DIR, then output_dir of the scenario,
    then the user cache."""
    return (flag or os.environ.get("FRACBOUND_OUTPUT_DIR") or configured
            or OUTPUT_FOLDER_PATH)

def ensure_output_dir(path=None):
    path = path or resolve_output_dir()
    if not os.path.exists(path):
        os.makedirs(path)
    return path

def find_resource(pattern, search_path):
    for root, dirs, files in os.walk(search_path):
        for name in files:
            if fnmatch.fnmatch(name, pattern):
                return os.path.join(root, name)
    return None

def find_field(name, search_dir=None):
    return find_resource(f"{name}.field.csv", search_dir or resolve_output_dir())
