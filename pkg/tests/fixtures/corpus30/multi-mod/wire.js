var net = require("net");
module.exports = function (port) { return net.connect(port); };
