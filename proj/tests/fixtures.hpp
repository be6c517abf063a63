#pragma once

#include "dcyt/matrix.hpp"
#include "dcyt/sut.hpp"

namespace dcyt::testing {

// Two-entity order/invoice matrix used across the suites. Order has two
// reads (a wide best read f2 and a narrow f5), two updates touching
// different attributes, and f4 additionally influences Invoice.
inline CrudMatrix make_order_matrix() {
    CrudMatrix matrix;
    matrix.entities.push_back({"Order", {"status", "total", "customer"}, {}, std::nullopt});
    matrix.entities.push_back({"Invoice", {"amount", "paid"}, {}, std::nullopt});
    for (int i = 1; i <= 9; ++i) {
        std::string id = "f" + std::to_string(i);
        matrix.functions.push_back({id, id, std::nullopt});
    }
    matrix.add_op("f1", "Order", OperationSpec::create());
    matrix.add_op("f2", "Order", OperationSpec::best_read({"status", "total", "customer"}));
    matrix.add_op("f3", "Order", OperationSpec::update({"status"}));
    matrix.add_op("f4", "Order", OperationSpec::update({"total"}));
    matrix.add_op("f4", "Invoice", OperationSpec::influenced("Order"));
    matrix.add_op("f5", "Order", OperationSpec::read({"status"}));
    matrix.add_op("f6", "Order", OperationSpec::del());
    matrix.add_op("f7", "Invoice", OperationSpec::best_read({"amount", "paid"}));
    matrix.add_op("f8", "Invoice", OperationSpec::create());
    matrix.add_op("f9", "Invoice", OperationSpec::del());
    return matrix;
}

// The artificial system behind the order/invoice matrix: three states, the
// order lifecycle spans s0..s2, and two defects plus one influence fact
// are injected.
inline ArtificialSut make_order_sut() {
    ArtificialSut sut;
    for (int i = 1; i <= 9; ++i) {
        std::string id = "f" + std::to_string(i);
        sut.functions.push_back({id, id, std::nullopt});
    }
    sut.entities.push_back({"Order", {"status", "total", "customer"}, {}, std::nullopt});
    sut.entities.push_back({"Invoice", {"amount", "paid"}, {}, std::nullopt});
    sut.states = {"s0", "s1", "s2"};
    sut.initial_state = "s0";

    LifecycleGraph order;
    order.entity = "Order";
    order.edges.push_back({"s0", "s1", "f1", {OperationSpec::create()}});
    order.edges.push_back({"s1", "s1", "f3", {OperationSpec::update({"status"})}});
    order.edges.push_back({"s1", "s1", "f4", {OperationSpec::update({"total"})}});
    order.edges.push_back({"s1", "s1", "f5", {OperationSpec::read({"status"})}});
    order.edges.push_back(
        {"s1", "s1", "f2", {OperationSpec::read({"status", "total", "customer"})}});
    order.edges.push_back(
        {"s2", "s2", "f2", {OperationSpec::read({"status", "total", "customer"})}});
    order.edges.push_back({"s1", "s2", "f6", {OperationSpec::del()}});
    sut.lifecycles.push_back(std::move(order));

    LifecycleGraph invoice;
    invoice.entity = "Invoice";
    invoice.edges.push_back({"s1", "s1", "f8", {OperationSpec::create()}});
    invoice.edges.push_back({"s1", "s1", "f7", {OperationSpec::read({"amount", "paid"})}});
    invoice.edges.push_back({"s1", "s1", "f9", {OperationSpec::del()}});
    sut.lifecycles.push_back(std::move(invoice));

    sut.defects.push_back({"Order", "f4", OpKind::Update, {{"f2", OpKind::Read}}});
    sut.defects.push_back({"Order", "f1", OpKind::Create, {{"f5", OpKind::Read}}});
    sut.influence_facts.push_back({"Invoice", "f4", "Order", 0.3});
    return sut;
}

}  // namespace dcyt::testing
