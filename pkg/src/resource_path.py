import os

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

def resource_path(relative_path):
    """Get absolute path to a resource shipped with the project. Absolute paths pass through."""
    if os.path.isabs(relative_path):
        return relative_path

    return os.path.join(PROJECT_ROOT, relative_path)
