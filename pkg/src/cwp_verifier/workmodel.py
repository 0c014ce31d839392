"""The complete work model: class diagram, behavior, machines and options."""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Optional

from rdflib import URIRef

from cwp_verifier.errors import UnknownClass
from cwp_verifier.query.pattern import THIS
from cwp_verifier.rules.model import RuleSet
from cwp_verifier.schema.semantic import SemanticSchema, TranslationOptions
from cwp_verifier.schema.translator import translate
from cwp_verifier.schema.uml import UmlClassModel
from cwp_verifier.statechart.machine import PropertyMutability, StateMachineDecl
from cwp_verifier.triples.terms import PrefixTable

logger = logging.getLogger(__name__)


@dataclass
class WorkModel:
    """Everything one model file declares.

    Two models are equal when their declarations are; the translated schema
    is a cache and takes no part in comparisons.
    """

    name: str
    prefixes: PrefixTable = field(default_factory=PrefixTable)
    uml: UmlClassModel = field(default_factory=UmlClassModel)
    rules: RuleSet = field(default_factory=RuleSet)
    machines: list[StateMachineDecl] = field(default_factory=list)
    mutability: PropertyMutability = field(default_factory=PropertyMutability)
    options: TranslationOptions = field(default_factory=TranslationOptions)
    _schema: Optional[SemanticSchema] = field(default=None, compare=False, repr=False)

    def schema(self) -> SemanticSchema:
        """Translate the class diagram under the model's options (cached)."""
        if self._schema is None:
            self._schema = translate(self.uml, self.options)
        return self._schema

    def with_options(self, options: TranslationOptions) -> "WorkModel":
        return dataclasses.replace(self, options=options, _schema=None)

    def with_rules(self, rules: RuleSet) -> "WorkModel":
        return dataclasses.replace(self, rules=rules, _schema=self._schema)

    def machine_for(self, cls: URIRef) -> Optional[StateMachineDecl]:
        schema = self.schema()
        return next((m for m in self.machines if schema.is_subclass(cls, m.subject_class)), None)

    def validate(self) -> None:
        """Check cross-references between declarations.

        Raises:
            InvalidModel: Class model or machine declaration is inconsistent
            UnknownClass: Behavior attached to an undeclared class
            UnboundFilterVariable: A filter can never be evaluated
            UnboundTemplateVariable: A template uses a variable WHERE never binds
        """
        self.uml.validate()
        classes = self.uml.class_names()

        def require(cls: URIRef, where: str) -> None:
            if cls not in classes:
                raise UnknownClass(
                    f"{where} is attached to unknown class {self.prefixes.render(cls)}", subject=where
                )

        for constraint in self.rules.constraints:
            require(constraint.attached_class, f"constraint {constraint.id}")
            constraint.body.validate(frozenset({THIS}))
        for constructor in self.rules.constructors:
            require(constructor.attached_class, "constructor")
            constructor.where.validate(frozenset({THIS}))
            constructor.template.check_bound(constructor.where.variables() | {THIS}, "CONSTRUCT")
        for rule in self.rules.rules:
            require(rule.attached_class, f"rule {rule.id}")
            rule.effective_where().validate()
            rule.check_templates()
        for machine in self.machines:
            machine.validate()
