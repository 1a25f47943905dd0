class ToolkitError(Exception):
    """
    Базовая ошибка модели. Все прикладные ошибки модулей наследуются от неё,
    а CLI переводит её в код завершения exit_code.
    """

    exit_code = 3

    def __init__(self, message="", **context):
        super().__init__(message)
        self.context = context

    def as_dict(self):
        return {
            "error": type(self).__name__,
            "message": str(self),
            "context": {key: repr(value) for key, value in self.context.items()},
        }


class ConfigError(ToolkitError):
    """
    Отсутствующие или некорректные ключи конфигурации эксперимента.
    """

    exit_code = 2
