from .cli_app import cli_click

if __name__ == "__main__":
    cli_click()
