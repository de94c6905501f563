class Base:
    def ping(self):
        return "ping"


class Mixin(Base):
    def describe(self):
        return self.ping()
