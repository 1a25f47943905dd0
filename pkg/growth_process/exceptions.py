from config.exceptions import ToolkitError


class WindowTooLarge(ToolkitError):
    """Окно локализации не короче самой траектории."""
